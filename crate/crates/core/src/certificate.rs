//! Pass/fail verdicts with a witness on failure.

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Where and why a check failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub t: Rational,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl Certificate {
    pub fn pass() -> Self {
        Certificate { verdict: Verdict::Pass, witness: None }
    }

    pub fn fail(t: Rational, detail: impl Into<String>) -> Self {
        Certificate { verdict: Verdict::Fail, witness: Some(Witness { t, detail: detail.into() }) }
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn json_shape() {
        let c = Certificate::fail(q(1, 2), "below lower bound");
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"verdict":"fail","witness":{"t":"1/2","detail":"below lower bound"}}"#);
        assert_eq!(serde_json::from_str::<Certificate>(&s).unwrap(), c);
        assert_eq!(serde_json::to_string(&Certificate::pass()).unwrap(), r#"{"verdict":"pass","witness":null}"#);
    }
}
