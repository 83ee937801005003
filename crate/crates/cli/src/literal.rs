//! Strict complex-literal parsing for CLI flags.
//!
//! Grammar: `[-]a[+|-]bi` with decimal or scientific parts; whitespace is
//! forbidden inside a literal.  Accepted shapes: `a`, `bi`, `a+bi`, `a-bi`,
//! each with an optional leading sign.  Vectors are comma-separated
//! literals.

use num_complex::Complex64;

/// Scan one unsigned number (decimal or scientific) starting at `pos`.
fn scan_number(s: &[u8], mut pos: usize) -> Option<(f64, usize)> {
    let start = pos;
    let mut saw_digit = false;
    while pos < s.len() && s[pos].is_ascii_digit() {
        pos += 1;
        saw_digit = true;
    }
    if pos < s.len() && s[pos] == b'.' {
        pos += 1;
        while pos < s.len() && s[pos].is_ascii_digit() {
            pos += 1;
            saw_digit = true;
        }
    }
    if !saw_digit {
        return None;
    }
    if pos < s.len() && (s[pos] == b'e' || s[pos] == b'E') {
        let mut p = pos + 1;
        if p < s.len() && (s[p] == b'+' || s[p] == b'-') {
            p += 1;
        }
        let digits_start = p;
        while p < s.len() && s[p].is_ascii_digit() {
            p += 1;
        }
        if p > digits_start {
            pos = p;
        }
    }
    let text = std::str::from_utf8(&s[start..pos]).ok()?;
    text.parse::<f64>().ok().map(|v| (v, pos))
}

fn scan_sign(s: &[u8], pos: usize) -> (f64, usize) {
    if pos < s.len() {
        match s[pos] {
            b'+' => return (1.0, pos + 1),
            b'-' => return (-1.0, pos + 1),
            _ => {}
        }
    }
    (1.0, pos)
}

/// Parse one complex literal, strictly.
pub fn parse_complex(input: &str) -> Result<Complex64, String> {
    let err = || format!("invalid complex literal {input:?}: expected [-]a[+|-]bi");
    let s = input.as_bytes();
    if s.is_empty() || s.iter().any(|b| b.is_ascii_whitespace()) {
        return Err(err());
    }
    let (sign1, pos) = scan_sign(s, 0);
    let (num1, pos) = scan_number(s, pos).ok_or_else(err)?;
    if pos == s.len() {
        return Ok(Complex64::new(sign1 * num1, 0.0));
    }
    if s[pos] == b'i' && pos + 1 == s.len() {
        return Ok(Complex64::new(0.0, sign1 * num1));
    }
    if s[pos] != b'+' && s[pos] != b'-' {
        return Err(err());
    }
    let (sign2, pos) = scan_sign(s, pos);
    let (num2, pos) = scan_number(s, pos).ok_or_else(err)?;
    if pos + 1 == s.len() && s[pos] == b'i' {
        Ok(Complex64::new(sign1 * num1, sign2 * num2))
    } else {
        Err(err())
    }
}

/// Parse a comma-separated vector of complex literals.
pub fn parse_complex_list(input: &str) -> Result<Vec<Complex64>, String> {
    if input.is_empty() {
        return Err("empty complex vector".into());
    }
    input.split(',').map(parse_complex).collect()
}
