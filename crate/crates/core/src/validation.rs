//! Tiny pass/fail harness shared by the runnable examples and the
//! acceptance suite: one labelled line per check, a summary, and a
//! process-friendly exit code.

#[derive(Debug, Default)]
pub struct ValidationHarness {
    name: String,
    passed: usize,
    failed: Vec<String>,
}

impl ValidationHarness {
    pub fn new(name: &str) -> Self {
        ValidationHarness {
            name: name.to_string(),
            passed: 0,
            failed: Vec::new(),
        }
    }

    pub fn check_bool(&mut self, label: &str, ok: bool) {
        if ok {
            self.passed += 1;
            println!("  PASS  {label}");
        } else {
            self.failed.push(label.to_string());
            println!("  FAIL  {label}");
        }
    }

    /// Passes when `value <= limit`.
    pub fn check_upper(&mut self, label: &str, value: f64, limit: f64) {
        self.check_bool(&format!("{label} ({value:.3e} <= {limit:.3e})"), value <= limit);
    }

    pub fn failures(&self) -> &[String] {
        &self.failed
    }

    pub fn all_passed(&self) -> bool {
        self.failed.is_empty()
    }

    /// Prints the summary and returns the exit code (0 pass, 1 fail).
    pub fn finish(&self) -> i32 {
        println!(
            "[{}] {} passed, {} failed",
            self.name,
            self.passed,
            self.failed.len()
        );
        for f in &self.failed {
            println!("  failed: {f}");
        }
        i32::from(!self.failed.is_empty())
    }
}
