/// Significant digits of every emitted number.
pub const SIG_DIGITS: usize = 9;

/// `x` with [`SIG_DIGITS`] significant digits in scientific notation;
/// exact zero prints as `0`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_finite() {
        format!("{:.*e}", SIG_DIGITS - 1, x)
    } else {
        x.to_string()
    }
}

pub trait CsvRow {
    const HEADER: &'static str;
    fn fields(&self) -> Vec<String>;
}

pub fn rows_to_csv<R: CsvRow>(rows: &[R]) -> String {
    let mut out = String::from(R::HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.fields().join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig(0.396241017), "3.96241017e-1");
        assert_eq!(fmt_sig(-1.0), "-1.00000000e0");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(123456789012.0), "1.23456789e11");
    }
}
