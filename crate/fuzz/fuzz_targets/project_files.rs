//! Input: a header line `q tau1 tau2`, then the vector file body, then
//! optionally a line `---` followed by the groups file body.

#![no_main]

use libfuzzer_sys::fuzz_target;
use normball::harness::{parse_groups, parse_vector};
use normball::{project, BallSpec, GroupNorm, GroupedVector};

fn parse(text: &str) -> Option<(GroupedVector, BallSpec)> {
    let (header, rest) = text.split_once('\n')?;
    let mut fields = header.split_whitespace();
    let q: GroupNorm = fields.next()?.parse().ok()?;
    let tau1: f64 = fields.next()?.parse().ok()?;
    let tau2: f64 = fields.next()?.parse().ok()?;
    let (vector, groups) = match rest.split_once("\n---\n") {
        Some((v, g)) => (v, Some(g)),
        None => (rest, None),
    };
    let values = parse_vector(vector).ok()?;
    let sizes = match groups {
        Some(g) => parse_groups(g).ok()?,
        None => vec![values.len()],
    };
    // capped so a single input cannot exhaust memory
    if sizes.iter().sum::<usize>() != values.len() || values.len() > 4096 {
        return None;
    }
    let c = GroupedVector::new(values, &sizes).ok()?;
    let spec = BallSpec::new(q, tau1, tau2).ok()?;
    Some((c, spec))
}

fuzz_target!(|data: &[u8]| {
    let Some((c, spec)) = std::str::from_utf8(data).ok().and_then(parse) else {
        return;
    };
    let r = match project(&c, &spec, None) {
        Ok(r) => r,
        Err(normball::Error::NonConvergence(_)) => return,
        Err(e) => panic!("valid input rejected: {e}"),
    };
    assert!(r.x.values().iter().all(|v| v.is_finite()));
    for (x, v) in r.x.values().iter().zip(c.values()) {
        assert!(x * v >= 0.0 && x.abs() <= v.abs());
    }
    // measure on a rescaled copy so the norms themselves cannot overflow
    let s = c.max_abs().max(f64::MIN_POSITIVE);
    let x =
        r.x.with_values(r.x.values().iter().map(|v| v / s).collect())
            .unwrap();
    let slack = 1e-6;
    assert!(spec.q.norm_of(&x) <= spec.tau1 / s + slack);
    assert!(x.l1_norm() <= spec.tau2 / s + slack);
});
