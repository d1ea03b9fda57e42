use serde::Serialize;

/// Outcome of one verification routine. Failing reports always carry at
/// least one concrete witness (a nonzero pairing or a mismatched value).
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub pass: bool,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spanning_size: Option<usize>,
    pub millis: u128,
}

impl VerificationReport {
    pub fn new(name: &str) -> Self {
        VerificationReport {
            name: name.to_string(),
            pass: true,
            witnesses: Vec::new(),
            spanning_size: None,
            millis: 0,
        }
    }

    pub fn fail(&mut self, witness: String) {
        self.pass = false;
        self.witnesses.push(witness);
    }
}
