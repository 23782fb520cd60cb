//! The standing example fields and towers used by the verification suites:
//! Q(i), Q(sqrt(-5)), and the cyclotomic fields of conductor 5, 13, 15, 20,
//! over the distinguished primes 3, 5, 19.

use crate::galois::{
    cyclotomic_surjection, make_cyclotomic_datum, make_quadratic_datum, transition, CMDatum,
    TowerMap,
};
use crate::{Error, Result};

/// Probe primes shared by every preset: covers the ramified primes of all
/// preset fields plus the distinguished primes.
pub const STANDARD_PRIMES: &[u64] = &[2, 3, 5, 13, 19];

pub const PRESET_NAMES: &[&str] =
    &["Q(i)", "Q(sqrt(-5))", "Q(zeta_5)", "Q(zeta_13)", "Q(zeta_15)", "Q(zeta_20)"];

pub const PRESET_PRIMES: &[u64] = &[3, 5, 19];

pub fn preset(name: &str, p: u64) -> Result<CMDatum> {
    match name {
        "Q(i)" => make_quadratic_datum(-1, p, STANDARD_PRIMES),
        "Q(sqrt(-5))" => make_quadratic_datum(-5, p, STANDARD_PRIMES),
        "Q(zeta_5)" => make_cyclotomic_datum(5, p, STANDARD_PRIMES),
        "Q(zeta_13)" => make_cyclotomic_datum(13, p, STANDARD_PRIMES),
        "Q(zeta_15)" => make_cyclotomic_datum(15, p, STANDARD_PRIMES),
        "Q(zeta_20)" => make_cyclotomic_datum(20, p, STANDARD_PRIMES),
        _ => Err(Error::Datum(format!("unknown preset {name}"))),
    }
}

/// Every preset field at every preset prime, in a fixed order.
pub fn all_preset_pairs() -> Vec<CMDatum> {
    let mut out = Vec::new();
    for name in PRESET_NAMES {
        for &p in PRESET_PRIMES {
            out.push(preset(name, p).expect("presets are valid"));
        }
    }
    out
}

/// The standing towers: Q(i) ⊂ Q(zeta_20) at 3, Q(zeta_5) ⊂ Q(zeta_15) at
/// 19, and Q(zeta_13) ⊂ Q(zeta_39) at 3 (the even-local-degree tower).
pub fn standard_towers() -> Result<Vec<(String, TowerMap)>> {
    let mut out = Vec::new();
    let small = make_cyclotomic_datum(4, 3, STANDARD_PRIMES)?;
    let large = make_cyclotomic_datum(20, 3, STANDARD_PRIMES)?;
    let surj = cyclotomic_surjection(&small, &large, 4, 20)?;
    out.push(("Q(zeta_4) in Q(zeta_20), p=3".to_string(), transition(&small, &large, &surj)?));
    let small = make_cyclotomic_datum(5, 19, STANDARD_PRIMES)?;
    let large = make_cyclotomic_datum(15, 19, STANDARD_PRIMES)?;
    let surj = cyclotomic_surjection(&small, &large, 5, 15)?;
    out.push(("Q(zeta_5) in Q(zeta_15), p=19".to_string(), transition(&small, &large, &surj)?));
    let small = make_cyclotomic_datum(13, 3, STANDARD_PRIMES)?;
    let large = make_cyclotomic_datum(39, 3, STANDARD_PRIMES)?;
    let surj = cyclotomic_surjection(&small, &large, 13, 39)?;
    out.push(("Q(zeta_13) in Q(zeta_39), p=3".to_string(), transition(&small, &large, &surj)?));
    Ok(out)
}
