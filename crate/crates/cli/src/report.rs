use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Aborted,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Serialize) -> Self {
        Check { name: name.into(), status, detail: serde_json::to_value(detail).expect("serializable detail") }
    }

    pub fn bool(name: impl Into<String>, ok: bool, detail: impl Serialize) -> Self {
        Check::new(name, Status::from_bool(ok), detail)
    }
}

/// Output of one command. Apart from `timing`, which is filled only on
/// request, the content is a function of the configuration and seed.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub status: Status,
    pub checks: Vec<Check>,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Value>,
}

impl Report {
    pub fn new(command: &str, config: Value, checks: Vec<Check>, data: Value) -> Self {
        let status = if checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if checks.iter().any(|c| c.status == Status::Aborted) {
            Status::Aborted
        } else {
            Status::Pass
        };
        Report { command: command.into(), config, status, checks, data, timing: None }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Aborted => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_priority() {
        let mk = |s: Status| Check::new("c", s, ());
        let r = Report::new("x", Value::Null, vec![mk(Status::Aborted), mk(Status::Pass)], Value::Null);
        assert_eq!(r.exit_code(), 2);
        let r = Report::new("x", Value::Null, vec![mk(Status::Aborted), mk(Status::Fail)], Value::Null);
        assert_eq!(r.exit_code(), 1);
        let r = Report::new("x", Value::Null, vec![], Value::Null);
        assert_eq!(r.exit_code(), 0);
        assert!(r.to_json().contains("\"status\": \"PASS\""));
    }
}
