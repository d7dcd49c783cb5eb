use crate::exactlin::Rational;

use super::dga::{Dga, DgaBuilder, Generator};
use super::length::Length;
use super::DgaError;

fn sign(d: i64) -> i64 {
    if d % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Name of a chord generator, e.g. `c1_01` or `cb1_10` for the barred one.
fn name(kind: &str, i: u8, j: u8) -> String {
    format!("{kind}_{i}{j}")
}

/// The chord generators shared by both built-ins, for components `p` and
/// `q`: `c0` on cross pairs, `c1` on all pairs, `cb1` on cross pairs and `c2`
/// on all pairs. `cross` and `cross_long` are the lengths of the shortest
/// cross chord and of the bent cross chord.
fn chord_generators(
    mut b: DgaBuilder,
    d: i64,
    (p, q): (u8, u8),
    cross: &Length,
    cross_long: &Length,
    c2_cross: &Length,
) -> DgaBuilder {
    let two = Length::from_int(2);
    let cross_pairs = [(p, q), (q, p)];
    let self_pairs = [(p, p), (q, q)];
    for (i, j) in cross_pairs {
        b = b.generator(Generator::new(name("c0", i, j), d - 2, cross.clone(), 1).with_tags(i, j));
    }
    for (i, j) in self_pairs {
        b = b.generator(Generator::new(name("c1", i, j), 2 * d - 3, two.clone(), 1).with_tags(i, j));
    }
    for (i, j) in cross_pairs {
        b = b.generator(Generator::new(name("c1", i, j), 2 * d - 3, cross.clone(), 1).with_tags(i, j));
    }
    for (i, j) in cross_pairs {
        b = b.generator(
            Generator::new(name("cb1", i, j), 2 * d - 3, cross_long.clone(), 1).with_tags(i, j),
        );
    }
    for (i, j) in [(p, p), (p, q), (q, p), (q, q)] {
        let len = if i == j { two.clone() } else { c2_cross.clone() };
        b = b.generator(Generator::new(name("c2", i, j), 3 * d - 4, len, 1).with_tags(i, j));
    }
    b
}

/// The Hopf-link DGA in `R^{2d-1}`: chord generators `C`, stabilising pairs
/// `D`, `E` and the differential `∂ + F`.
pub fn build_hopf(d: i64) -> Result<Dga, DgaError> {
    if d < 2 {
        return Err(DgaError::ParameterOutOfRange(format!("hopf needs d >= 2, got {d}")));
    }
    let one = Length::from_int(1);
    let two = Length::from_int(2);
    let three = Length::from_int(3);
    let mut b = chord_generators(DgaBuilder::new(format!("hopf(d={d})")), d, (0, 1), &one, &one, &three);
    for i in [0u8, 1] {
        b = b.generator(Generator::new(name("d1", i, i), 2 * d - 3, two.clone(), 2).with_tags(i, i));
    }
    for (i, j) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
        let len = if i == j { two.clone() } else { three.clone() };
        b = b.generator(Generator::new(name("d2", i, j), 3 * d - 4, len, 2).with_tags(i, j));
    }
    for i in [0u8, 1] {
        b = b.generator(Generator::new(name("e1", i, i), 2 * d - 4, two.clone(), 2).with_tags(i, i));
    }
    for (i, j) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
        let len = if i == j { two.clone() } else { three.clone() };
        b = b.generator(Generator::new(name("e2", i, j), 3 * d - 5, len, 2).with_tags(i, j));
    }

    let s = sign(d);
    b = b
        .with_split()
        .partial_term("d1_00", 1, &["e1_00"])
        .partial_term("d1_11", 1, &["e1_11"]);
    for ij in ["00", "01", "10", "11"] {
        b = b.partial_term(&format!("d2_{ij}"), 1, &[&format!("e2_{ij}")]);
    }
    b = b
        .term("c1_00", s, &["e1_00"])
        .term("c1_00", s, &["c0_01", "c0_10"])
        .term("c1_11", s, &["e1_11"])
        .term("c1_11", 1, &["c0_10", "c0_01"])
        .term("c2_00", -1, &["e2_00"])
        .term("c2_00", -1, &["cb1_01", "c0_10"])
        .term("c2_00", -s, &["c1_01", "c0_10"])
        .term("c2_11", -1, &["e2_11"])
        .term("c2_11", -s, &["cb1_10", "c0_01"])
        .term("c2_11", -1, &["c1_10", "c0_01"])
        .term("c2_01", -1, &["e2_01"])
        .term("c2_10", -1, &["e2_10"]);
    b.build()
}

/// The two-component unlink DGA in `R^{2d-1}` with the second circle at
/// height `z2star`: chord generators only, zero differential.
pub fn build_unlink(d: i64, z2star: &Rational) -> Result<Dga, DgaError> {
    if d < 2 {
        return Err(DgaError::ParameterOutOfRange(format!("unlink needs d >= 2, got {d}")));
    }
    let z = z2star.abs();
    if z.cmp(&Rational::from_int(2)) != std::cmp::Ordering::Greater {
        return Err(DgaError::ParameterOutOfRange(format!(
            "unlink needs |z2star| > 2, got {z2star}"
        )));
    }
    let cross = Length::rational(z.clone());
    let bent = Length::sqrt_of(&(&(&z * &z) + &Rational::from_int(4)))?;
    let b = chord_generators(
        DgaBuilder::new(format!("unlink(d={d}, z2star={z})")),
        d,
        (0, 2),
        &cross,
        &bent,
        &bent,
    );
    b.build()
}
