use std::time::Duration;

use super::fetch::Fetcher;
use super::plan::PROVIDER_KEY_ENV;

/// Blocking HTTP fetcher for a static-map provider. The credential is read
/// from the environment and substituted for `{key}` only when a request is made.
pub struct HttpFetcher {
    agent: ureq::Agent,
    key: String,
}

impl HttpFetcher {
    pub fn from_env() -> Result<Self, String> {
        let key = std::env::var(PROVIDER_KEY_ENV).map_err(|_| format!("{PROVIDER_KEY_ENV} is not set"))?;
        Ok(Self::with_key(key))
    }

    pub fn with_key(key: String) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(30)))
            .build()
            .into();
        HttpFetcher { agent, key }
    }
}

impl Fetcher for HttpFetcher {
    fn fetch(&self, uri: &str) -> Result<Vec<u8>, String> {
        let uri = uri.replace("{key}", &self.key);
        let mut resp = self.agent.get(&uri).call().map_err(|e| e.to_string())?;
        resp.body_mut().read_to_vec().map_err(|e| e.to_string())
    }
}
