/// `%.12g`-style rendering: 12 significant digits, trailing zeros dropped,
/// exponent form outside `1e-5 ..= 1e12`.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    } else {
        let m = trim(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" { "0".into() } else { t.to_string() }
}

pub fn line(name: &str, value: impl std::fmt::Display) -> String {
    format!("{name} = {value}\n")
}

/// Real and imaginary parts, the imaginary part shown only when nonzero at
/// 12 digits.
pub fn complex(re: f64, im: f64) -> String {
    let im_s = sig12(im);
    if im_s == "0" {
        return sig12(re);
    }
    match im_s.strip_prefix('-') {
        Some(mag) => format!("{} - {mag}i", sig12(re)),
        None => format!("{} + {im_s}i", sig12(re)),
    }
}
