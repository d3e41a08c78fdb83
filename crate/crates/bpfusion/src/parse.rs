//! Parsing of the textual label grammar.
//!
//! ```text
//! [r0,r1,r2;s0,s1,s2]          RSLabel
//! [[r0,r1,r2;s0,s1,s2]]        OrbitClass (any member, canonicalised)
//! I[r0,r1,r2;s0,s1,s2]^ell     highest-weight label, `^ell` optional
//! R~[j;[[...]]]^ell            standard label, `^ell` optional
//! ```
//!
//! `ell` is an integer or `p/2`; `j` is an integer or `p/q` and is reduced mod 1.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::labels::{FormalSum, HWLabel, HalfInt, Label, StandardLabel};
use crate::weights::{frac, LevelParams, OrbitClass, RSLabel};
use crate::Q;

fn err(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse { input: input.to_string(), reason: reason.into() }
}

fn int(input: &str, t: &str) -> Result<i64> {
    t.trim().parse().map_err(|_| err(input, format!("expected integer, found `{}`", t.trim())))
}

/// Parses `p/q` or `p`.
pub fn parse_q(input: &str) -> Result<Q> {
    let t = input.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (int(input, a)?, int(input, b)?);
            if b == 0 {
                return Err(err(input, "zero denominator"));
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from(int(input, t)?)),
    }
}

pub fn parse_halfint(input: &str) -> Result<HalfInt> {
    HalfInt::from_q(parse_q(input)?).ok_or_else(|| err(input, "flow must be an integer or half-integer"))
}

fn triple(input: &str, t: &str) -> Result<[i64; 3]> {
    let parts: Vec<&str> = t.split(',').collect();
    if parts.len() != 3 {
        return Err(err(input, "expected three comma-separated integers"));
    }
    Ok([int(input, parts[0])?, int(input, parts[1])?, int(input, parts[2])?])
}

fn bracketed<'a>(input: &str, t: &'a str, open: &str, close: &str) -> Result<&'a str> {
    t.trim()
        .strip_prefix(open)
        .and_then(|x| x.strip_suffix(close))
        .ok_or_else(|| err(input, format!("expected `{open}...{close}`")))
}

fn rs_body(input: &str, body: &str) -> Result<RSLabel> {
    let (r, s) = body.split_once(';').ok_or_else(|| err(input, "missing `;` between r and s"))?;
    Ok(RSLabel::new(triple(input, r)?, triple(input, s)?))
}

impl FromStr for RSLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().starts_with("[[") {
            return Err(err(s, "orbit brackets where a single label was expected"));
        }
        rs_body(s, bracketed(s, s, "[", "]")?)
    }
}

impl FromStr for OrbitClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(OrbitClass::of(&rs_body(s, bracketed(s, s, "[[", "]]")?)?))
    }
}

/// Splits a trailing `^ell`, defaulting to flow zero.
fn split_flow<'a>(input: &str, t: &'a str) -> Result<(&'a str, HalfInt)> {
    match t.rfind('^') {
        Some(i) if t[i..].contains(']') => Err(err(input, "misplaced `^`")),
        Some(i) => Ok((&t[..i], parse_halfint(&t[i + 1..]).map_err(|_| err(input, "bad flow after `^`"))?)),
        None => Ok((t, HalfInt::ZERO)),
    }
}

/// Parses any label; highest-weight labels are checked against the level.
pub fn parse_label(p: &LevelParams, input: &str) -> Result<Label> {
    let t = input.trim();
    if let Some(rest) = t.strip_prefix('I') {
        let (body, ell) = split_flow(input, rest)?;
        let lam = rs_body(input, bracketed(input, body, "[", "]")?)?;
        return Ok(Label::Hw(HWLabel::new(p, ell, lam)?));
    }
    if let Some(rest) = t.strip_prefix("R~") {
        let (body, ell) = split_flow(input, rest)?;
        let inner = bracketed(input, body, "[", "]")?;
        let (j, orbit) = inner.split_once(';').ok_or_else(|| err(input, "missing `;` after charge"))?;
        let orbit: OrbitClass = orbit.parse().map_err(|_| err(input, "bad orbit in standard label"))?;
        if !orbit.rep().in_infwts(p) {
            return Err(Error::NotInfinite(orbit.rep()));
        }
        return Ok(Label::Std(StandardLabel::new(ell, frac(parse_q(j)?), orbit)));
    }
    Err(err(input, "labels start with `I[` or `R~[`"))
}

pub fn parse_rs(p: &LevelParams, input: &str) -> Result<RSLabel> {
    let l: RSLabel = input.parse()?;
    if !l.in_sigma(p) {
        return Err(Error::NotInSigma(l));
    }
    Ok(l)
}

pub fn parse_orbit(p: &LevelParams, input: &str) -> Result<OrbitClass> {
    let o: OrbitClass = input.parse()?;
    if !o.rep().in_infwts(p) {
        return Err(Error::NotInfinite(o.rep()));
    }
    Ok(o)
}

/// Parses `c*label + c*label - ...` as printed by [`FormalSum`]'s `Display`.
pub fn parse_formal_sum(p: &LevelParams, input: &str) -> Result<FormalSum> {
    let mut out = FormalSum::new();
    let t = input.trim();
    if t == "0" {
        return Ok(out);
    }
    // Terms are separated by " + " or " - " at bracket depth zero.
    let mut depth = 0i32;
    let mut start = 0;
    let mut sign = 1;
    let bytes = t.as_bytes();
    let mut push = |seg: &str, sign: i64| -> Result<()> {
        let seg = seg.trim();
        let (c, lab) = match seg.split_once('*') {
            Some((c, l)) => (int(input, c)?, l),
            None => (1, seg),
        };
        out.add_term(parse_label(p, lab)?, sign * c);
        Ok(())
    };
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'[' => depth += 1,
            b']' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 && bytes[i - 1] == b' ' => {
                push(&t[start..i], sign)?;
                sign = if bytes[i] == b'+' { 1 } else { -1 };
                start = i + 1;
            }
            b'-' if depth == 0 && i == 0 => {
                sign = -1;
                start = 1;
            }
            _ => {}
        }
        i += 1;
    }
    push(&t[start..], sign)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{enumerate_infwts, enumerate_surv, level_params};
    use proptest::prelude::*;

    #[test]
    fn round_trips() {
        let p = level_params(4, 5).unwrap();
        for lam in enumerate_surv(&p) {
            assert_eq!(parse_rs(&p, &lam.to_string()).unwrap(), lam);
            for twice in [-3, 0, 4] {
                let h = HWLabel::new(&p, HalfInt::from_twice(twice), lam).unwrap();
                assert_eq!(parse_label(&p, &h.to_string()).unwrap(), Label::Hw(h));
            }
        }
        for o in enumerate_infwts(&p) {
            assert_eq!(parse_orbit(&p, &o.to_string()).unwrap(), o);
            let s = StandardLabel::new(HalfInt::from_twice(-1), Q::new(5, 12), o);
            assert_eq!(parse_label(&p, &s.to_string()).unwrap(), Label::Std(s));
        }
    }

    #[test]
    fn accepts_any_orbit_member() {
        let p = level_params(5, 3).unwrap();
        let a = parse_orbit(&p, "[[0,1,1;0,0,0]]").unwrap();
        let b = parse_orbit(&p, "[[1,0,1;0,0,0]]").unwrap();
        assert_eq!(a, b);
        let l = parse_label(&p, "R~[9/7;[[1,1,0;0,0,0]]]").unwrap();
        assert_eq!(l.ell(), HalfInt::ZERO);
        let Label::Std(s) = l else { panic!() };
        assert_eq!(s.j(), Q::new(2, 7));
    }

    #[test]
    fn formal_sum_round_trip() {
        let p = level_params(3, 4).unwrap();
        let o = enumerate_infwts(&p)[0];
        let mut f = FormalSum::new();
        f.add_term(StandardLabel::new(HalfInt::int(-1), Q::new(1, 3), o), 2);
        f.add_term(HWLabel::new(&p, HalfInt::int(2), RSLabel::new([0, 0, 0], [0, 0, 1])).unwrap(), -1);
        assert_eq!(parse_formal_sum(&p, &f.to_string()).unwrap(), f);
        assert!(parse_formal_sum(&p, "0").unwrap().is_empty());
    }

    #[test]
    fn rejects_garbage() {
        let p = level_params(3, 4).unwrap();
        for bad in ["", "I", "I[0,0,0;0,0]", "R~[x;[[0,0,0;1,0,0]]]", "I[0,0,0;0,0,1]^1/3", "[[0,0,0;0,0,1]", "Q[1,2,3;4,5,6]", "I[0,0,0;5,0,0]", "R~[1/0;[[0,0,0;1,0,0]]]"] {
            assert!(parse_label(&p, bad).is_err(), "{bad}");
        }
    }

    proptest! {
        #[test]
        fn parse_never_panics(s in "\\PC{0,40}") {
            let p = level_params(4, 5).unwrap();
            let _ = parse_label(&p, &s);
            let _ = parse_formal_sum(&p, &s);
            let _ = s.parse::<RSLabel>();
        }

        #[test]
        fn parse_never_panics_near_grammar(s in "(I|R~)?\\[[-0-9,;/\\[\\]]{0,30}\\](\\^-?[0-9/]{0,4})?") {
            let p = level_params(5, 4).unwrap();
            let _ = parse_label(&p, &s);
        }
    }
}
