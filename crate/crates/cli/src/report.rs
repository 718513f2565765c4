use serde::Serialize;

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// A titled block of output; `passed` is set when the block is a check.
#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Section {
    pub title: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    pub lines: Vec<String>,
}

impl Section {
    pub fn info(title: impl Into<String>, lines: Vec<String>) -> Self {
        Self { title: title.into(), passed: None, lines }
    }

    pub fn check(title: impl Into<String>, passed: bool, lines: Vec<String>) -> Self {
        Self { title: title.into(), passed: Some(passed), lines }
    }
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub seed: u64,
    pub sections: Vec<Section>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(command: String, seed: u64) -> Self {
        Self { command, status: Status::Pass, seed, sections: Vec::new(), error: None }
    }

    pub fn push(&mut self, s: Section) {
        if s.passed == Some(false) && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.sections.push(s);
    }

    pub fn fail_with_error(&mut self, msg: String) {
        self.status = Status::Error;
        self.error = Some(msg);
    }

    pub fn section(&self, title: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.title == title)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("divaria {}\n", self.command);
        for s in &self.sections {
            match s.passed {
                Some(p) => out.push_str(&format!("\n[{}] {}\n", if p { "pass" } else { "FAIL" }, s.title)),
                None => out.push_str(&format!("\n{}\n", s.title)),
            }
            for l in &s.lines {
                out.push_str("  ");
                out.push_str(l);
                out.push('\n');
            }
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("\nerror: {e}\n"));
        }
        out.push_str(&format!("\nstatus: {} (seed {})\n", self.status.as_str(), self.seed));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
