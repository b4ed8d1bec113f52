//! Text formatting shared by the exporters.

/// Nine significant digits, `%g` style.
pub fn fmt9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..9).contains(&e) {
        let decimals = (8 - e).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        trim(&s)
    } else {
        let s = format!("{:.8e}", x);
        match s.split_once('e') {
            Some((m, exp)) => format!("{}e{}", trim(m), exp),
            None => s,
        }
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::fmt9;

    #[test]
    fn nine_digits() {
        assert_eq!(fmt9(std::f64::consts::PI), "3.14159265");
        assert_eq!(fmt9(48.0), "48");
        assert_eq!(fmt9(-0.000123456789123), "-0.000123456789");
        assert_eq!(fmt9(1.5e-12), "1.5e-12");
        assert_eq!(fmt9(123456789012.0), "1.23456789e11");
    }
}
