//! JSON encodings of states, POVMs and Neumark dilations.
//!
//! Complex entries are `[re, im]` pairs and matrices are row-major arrays of
//! rows. Writers emit every real with 17 significant digits, so reading a
//! written file back gives the same bits.

use std::fmt::Write as _;

use discord_core::linalg::ComplexMatrix;
use discord_core::measurements::{Measurement, NeumarkDilation, Povm};
use discord_core::states::DensityMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use crate::CliError;

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: Vec<usize>,
    matrix: RawMatrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PovmFile {
    dim: usize,
    effects: Vec<RawMatrix>,
}

fn to_matrix(raw: &RawMatrix, what: &str) -> Result<ComplexMatrix, CliError> {
    let n = raw.len();
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::Input(format!(
                "{what}: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !(re.is_finite() && im.is_finite()) {
                return Err(CliError::Input(format!("{what}: entry ({i}, {j}) is not finite")));
            }
            data.push(Complex64::new(re, im));
        }
    }
    ComplexMatrix::from_vec(n, n, data).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

pub fn parse_state(text: &str) -> Result<DensityMatrix, CliError> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("state file: {e}")))?;
    let m = to_matrix(&file.matrix, "state matrix")?;
    DensityMatrix::new(m, file.dims).map_err(|e| CliError::Input(format!("state file: {e}")))
}

pub fn parse_povm(text: &str) -> Result<Povm, CliError> {
    let file: PovmFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("POVM file: {e}")))?;
    let mut effects = Vec::with_capacity(file.effects.len());
    for (x, raw) in file.effects.iter().enumerate() {
        let m = to_matrix(raw, &format!("effect {x}"))?;
        if m.rows() != file.dim {
            return Err(CliError::Input(format!(
                "effect {x} is {}x{}, but dim is {}",
                m.rows(),
                m.cols(),
                file.dim
            )));
        }
        effects.push(m);
    }
    Povm::new(effects).map_err(|e| CliError::Input(format!("POVM file: {e}")))
}

fn real(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").expect("writing to a String cannot fail");
}

fn complex(out: &mut String, z: Complex64) {
    out.push('[');
    real(out, z.re);
    out.push_str(", ");
    real(out, z.im);
    out.push(']');
}

fn vector(out: &mut String, v: &[Complex64]) {
    out.push('[');
    for (i, z) in v.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        complex(out, *z);
    }
    out.push(']');
}

fn matrix(out: &mut String, m: &ComplexMatrix, indent: &str) {
    out.push_str("[\n");
    for i in 0..m.rows() {
        out.push_str(indent);
        out.push_str("  ");
        vector(out, m.row(i));
        out.push_str(if i + 1 < m.rows() { ",\n" } else { "\n" });
    }
    out.push_str(indent);
    out.push(']');
}

fn matrix_list(out: &mut String, ms: &[ComplexMatrix]) {
    out.push_str("[\n");
    for (x, m) in ms.iter().enumerate() {
        out.push_str("    ");
        matrix(out, m, "    ");
        out.push_str(if x + 1 < ms.len() { ",\n" } else { "\n" });
    }
    out.push_str("  ]");
}

fn int_list(xs: &[usize]) -> String {
    let items: Vec<String> = xs.iter().map(usize::to_string).collect();
    format!("[{}]", items.join(", "))
}

pub fn write_state(rho: &DensityMatrix) -> String {
    let mut out = format!("{{\n  \"dims\": {},\n  \"matrix\": ", int_list(rho.dims()));
    matrix(&mut out, rho.matrix(), "  ");
    out.push_str("\n}\n");
    out
}

pub fn write_dilation(d: &NeumarkDilation) -> String {
    let mut out = format!(
        "{{\n  \"system_dim\": {},\n  \"ancilla_dim\": {},\n  \"ancilla_state\": ",
        d.system_dim, d.ancilla_dim
    );
    vector(&mut out, d.ancilla_state.amplitudes());
    out.push_str(",\n  \"ancilla_projectors\": ");
    matrix_list(&mut out, d.ancilla_projectors.effects());
    out.push_str(",\n  \"unitary\": ");
    matrix(&mut out, &d.unitary, "  ");
    out.push_str("\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use discord_core::measurements::trine;

    fn write_povm(p: &Povm) -> String {
        let mut out = format!("{{\n  \"dim\": {},\n  \"effects\": ", p.dim());
        matrix_list(&mut out, p.effects());
        out.push_str("\n}\n");
        out
    }

    #[test]
    fn state_round_trips_bit_exactly() {
        let third = 1.0 / 3.0;
        let m = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Complex64::new(third, 0.0),
            (1, 1) => Complex64::new(1.0 - third, 0.0),
            (0, 1) => Complex64::new(0.1, -1e-17),
            _ => Complex64::new(0.1, 1e-17),
        });
        let rho = DensityMatrix::new(m, vec![2]).unwrap();
        let back = parse_state(&write_state(&rho)).unwrap();
        for (a, b) in rho.matrix().as_slice().iter().zip(back.matrix().as_slice()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn povm_round_trips() {
        let p = trine();
        let back = parse_povm(&write_povm(&p)).unwrap();
        assert_eq!(p.effects(), back.effects());
    }

    #[test]
    fn ragged_matrix_is_rejected_with_position() {
        let err = parse_state(r#"{"dims":[2],"matrix":[[[1,0],[0,0]],[[0,0]]]}"#).unwrap_err();
        assert!(err.to_string().contains("row 1"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse_state(r#"{"dims":[1],"matrix":[[[1,0]]],"extra":1}"#).is_err());
    }
}
