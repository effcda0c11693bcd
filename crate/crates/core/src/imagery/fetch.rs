//! Cached, rate-limited batch fetching of planned images.
//!
//! Every request attempt (including retries) takes a token from a shared
//! bucket; cache hits take none. Workers pull plans from a shared cursor, so
//! at most `parallel` requests are in flight. Time is read through a
//! [`Clock`] so tests can run the scheduler on virtual time.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use log::warn;
use serde::{Deserialize, Serialize};

use super::cache::ImageCache;
use super::plan::ImagePlan;
use crate::inventory::BuildingId;

pub trait Clock: Send + Sync {
    /// Time elapsed since the clock's origin.
    fn now(&self) -> Duration;
    /// Blocks (or, for virtual clocks, advances time) until `deadline`.
    fn sleep_until(&self, deadline: Duration);

    fn sleep(&self, d: Duration) {
        self.sleep_until(self.now() + d);
    }
}

#[derive(Debug)]
pub struct SystemClock {
    origin: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        SystemClock { origin: Instant::now() }
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }

    fn sleep_until(&self, deadline: Duration) {
        if let Some(d) = deadline.checked_sub(self.now()) {
            thread::sleep(d);
        }
    }
}

/// Time that only moves when someone sleeps. Sleeping past "now" jumps the
/// clock forward; sleeping to an earlier deadline is a no-op.
#[derive(Debug, Default)]
pub struct VirtualClock {
    now: Mutex<Duration>,
}

impl VirtualClock {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Clock for VirtualClock {
    fn now(&self) -> Duration {
        *self.now.lock().unwrap()
    }

    fn sleep_until(&self, deadline: Duration) {
        let mut now = self.now.lock().unwrap();
        if deadline > *now {
            *now = deadline;
        }
        drop(now);
        thread::yield_now();
    }
}

/// Classic token bucket: capacity `burst`, refilled continuously at `rate` per second.
#[derive(Debug)]
pub struct TokenBucket {
    rate: f64,
    burst: f64,
    state: Mutex<(f64, Duration)>,
}

impl TokenBucket {
    pub fn new(rate: f64, burst: u32, start: Duration) -> Self {
        assert!(rate > 0.0, "rate must be positive");
        let burst = f64::from(burst.max(1));
        TokenBucket { rate, burst, state: Mutex::new((burst, start)) }
    }

    /// Takes one token, waiting on `clock` as needed. Returns the grant time.
    pub fn acquire(&self, clock: &dyn Clock) -> Duration {
        loop {
            let deadline = {
                let mut state = self.state.lock().unwrap();
                let now = clock.now();
                let (tokens, last) = *state;
                let elapsed = now.saturating_sub(last).as_secs_f64();
                let tokens = (tokens + elapsed * self.rate).min(self.burst);
                if tokens >= 1.0 {
                    *state = (tokens - 1.0, now);
                    return now;
                }
                *state = (tokens, now);
                // Rounded up and never zero: a sub-nanosecond deficit would
                // otherwise spin on a clock that only moves when slept on.
                let wait_ns = ((1.0 - tokens) / self.rate * 1e9).ceil().max(1.0);
                now + Duration::from_nanos(wait_ns as u64)
            };
            clock.sleep_until(deadline);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FetchLimits {
    pub rate_per_sec: f64,
    pub burst: u32,
    pub parallel: usize,
    pub max_retries: u32,
    /// Delay before the first retry; doubles on each further retry.
    pub backoff_base: Duration,
}

impl Default for FetchLimits {
    fn default() -> Self {
        FetchLimits {
            rate_per_sec: 10.0,
            burst: 10,
            parallel: 8,
            max_retries: 3,
            backoff_base: Duration::from_millis(500),
        }
    }
}

/// Anything that turns a request URI into image bytes.
pub trait Fetcher: Send + Sync {
    fn fetch(&self, uri: &str) -> Result<Vec<u8>, String>;
}

impl<F> Fetcher for F
where
    F: Fn(&str) -> Result<Vec<u8>, String> + Send + Sync,
{
    fn fetch(&self, uri: &str) -> Result<Vec<u8>, String> {
        self(uri)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FetchStatus {
    Fetched,
    Cached,
    Failed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FetchOutcome {
    pub building_id: BuildingId,
    pub status: FetchStatus,
    /// Image payload for `Fetched` and `Cached`.
    pub bytes: Option<Vec<u8>>,
    pub failure: Option<String>,
    pub retry_count: u32,
}

#[derive(Debug, Clone, Default)]
pub struct FetchReport {
    /// One outcome per plan, in plan order.
    pub outcomes: Vec<FetchOutcome>,
    /// Clock time at which each request attempt was granted, sorted.
    pub request_times: Vec<Duration>,
}

impl FetchReport {
    pub fn count(&self, status: FetchStatus) -> usize {
        self.outcomes.iter().filter(|o| o.status == status).count()
    }
}

fn fetch_one(
    plan: &ImagePlan,
    fetcher: &dyn Fetcher,
    cache: &dyn ImageCache,
    limits: &FetchLimits,
    bucket: &TokenBucket,
    clock: &dyn Clock,
    times: &Mutex<Vec<Duration>>,
) -> FetchOutcome {
    if let Some(bytes) = cache.get(&plan.cache_key) {
        return FetchOutcome {
            building_id: plan.building_id.clone(),
            status: FetchStatus::Cached,
            bytes: Some(bytes),
            failure: None,
            retry_count: 0,
        };
    }
    let mut attempt = 0u32;
    loop {
        let granted = bucket.acquire(clock);
        times.lock().unwrap().push(granted);
        let err = match fetcher.fetch(&plan.request_uri) {
            Ok(bytes) if !bytes.is_empty() => {
                if let Err(e) = cache.put(&plan.cache_key, &plan.request_uri, &bytes) {
                    warn!("cache write failed key={} err={e}", plan.cache_key);
                }
                return FetchOutcome {
                    building_id: plan.building_id.clone(),
                    status: FetchStatus::Fetched,
                    bytes: Some(bytes),
                    failure: None,
                    retry_count: attempt,
                };
            }
            Ok(_) => "empty payload".to_string(),
            Err(e) => e,
        };
        if attempt >= limits.max_retries {
            return FetchOutcome {
                building_id: plan.building_id.clone(),
                status: FetchStatus::Failed,
                bytes: None,
                failure: Some(err),
                retry_count: attempt,
            };
        }
        clock.sleep(limits.backoff_base * 2u32.saturating_pow(attempt));
        attempt += 1;
    }
}

/// Fetches every plan not already cached. Per-item failures never abort the batch.
pub fn execute_fetch(
    plans: &[ImagePlan],
    fetcher: &dyn Fetcher,
    cache: &dyn ImageCache,
    limits: &FetchLimits,
    clock: Arc<dyn Clock>,
) -> FetchReport {
    let bucket = TokenBucket::new(limits.rate_per_sec, limits.burst, clock.now());
    let slots: Vec<Mutex<Option<FetchOutcome>>> = plans.iter().map(|_| Mutex::new(None)).collect();
    let times = Mutex::new(Vec::new());
    let cursor = AtomicUsize::new(0);
    let workers = limits.parallel.clamp(1, plans.len().max(1));

    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::SeqCst);
                let Some(plan) = plans.get(i) else { break };
                let outcome = fetch_one(plan, fetcher, cache, limits, &bucket, clock.as_ref(), &times);
                *slots[i].lock().unwrap() = Some(outcome);
            });
        }
    });

    let outcomes = slots.into_iter().map(|m| m.into_inner().unwrap().expect("every plan is visited")).collect();
    let mut request_times = times.into_inner().unwrap();
    request_times.sort();
    FetchReport { outcomes, request_times }
}
