use std::fmt;

/// `value` with 12 significant digits, `%g` style: fixed notation for
/// moderate magnitudes, trailing zeros trimmed.
pub fn fmt_sig(value: f64) -> String {
    const DIGITS: i32 = 12;
    if value == 0.0 {
        return "0".into();
    }
    if !value.is_finite() {
        return if value.is_nan() { "nan".into() } else if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, value);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim(format!("{value:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// One reported quantity with its configuration and optional expectation.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub quantity: String,
    pub config: String,
    pub value: f64,
    pub expected: Option<f64>,
    pub tolerance: f64,
    /// Extra qualifier such as "upper bound".
    pub note: Option<String>,
}

impl ReportRow {
    pub fn new(quantity: impl Into<String>, config: impl Into<String>, value: f64) -> Self {
        Self { quantity: quantity.into(), config: config.into(), value, expected: None, tolerance: 0.0, note: None }
    }

    pub fn expect(mut self, expected: f64, tolerance: f64) -> Self {
        self.expected = Some(expected);
        self.tolerance = tolerance;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn pass(&self) -> bool {
        match self.expected {
            Some(e) => (self.value - e).abs() <= self.tolerance,
            None => true,
        }
    }
}

impl fmt::Display for ReportRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.quantity, fmt_sig(self.value))?;
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        if let Some(e) = self.expected {
            let verdict = if self.pass() { "PASS" } else { "FAIL" };
            write!(f, "  expected {} tol {:e}  {verdict}", fmt_sig(e), self.tolerance)?;
        }
        write!(f, "  [{}]", self.config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(14.0 / 9.0), "1.55555555556");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(0.25), "0.25");
        assert_eq!(fmt_sig(-0.001234), "-0.001234");
        assert_eq!(fmt_sig(1.0 + 6f64.sqrt() / 4.0), "1.6123724357");
        assert_eq!(fmt_sig(1.5e-9), "1.5e-9");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn pass_flag() {
        assert!(ReportRow::new("x", "", 1.0).expect(1.0 + 1e-10, 1e-9).pass());
        assert!(!ReportRow::new("x", "", 1.0).expect(1.1, 1e-9).pass());
        assert!(ReportRow::new("x", "", 1.0).pass());
    }
}
