use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// Effective values of every flag, defaults included.
    pub config: Value,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    pub version: String,
}

impl RunReport {
    pub fn new(command: &str, config: Value, results: Value) -> Self {
        RunReport {
            command: command.into(),
            config,
            results,
            pass: None,
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }

    pub fn render(&self, pretty: bool) -> String {
        let out = if pretty {
            serde_json::to_string_pretty(self)
        } else {
            serde_json::to_string(self)
        };
        out.expect("reports are plain JSON values")
    }
}
