use std::collections::BTreeMap;
use std::io::Read;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{parse_rational, FormulaKind, QuantumNumbers, Target};
use crate::error::MassError;
use crate::scalar::q_to_f64;

const HEADER: [&str; 6] = ["name", "mass_mev", "Y", "J", "S", "multiplet"];

/// One particle from an ingested table.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleRow {
    pub name: String,
    pub mass_mev: f64,
    pub qn: QuantumNumbers,
    pub multiplet: String,
}

/// Reads `name,mass_mev,Y,J,S,multiplet` rows. Empty quantum-number cells are
/// absent values; lines starting with `#` are skipped.
pub fn read_particle_table<R: Read>(reader: R) -> Result<Vec<ParticleRow>, MassError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| MassError::Csv(e.to_string()))?;
    if header.iter().ne(HEADER) {
        return Err(MassError::Csv(format!(
            "header must be `{}`, got `{}`",
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| MassError::Csv(e.to_string()))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let at = |e: MassError| MassError::Csv(format!("line {line}: {e}"));
        let opt = |s: &str| -> Result<Option<_>, MassError> {
            if s.is_empty() {
                Ok(None)
            } else {
                parse_rational(s).map(Some)
            }
        };
        let mass = parse_rational(&rec[1]).map_err(at)?;
        let mass_mev = q_to_f64(&mass);
        if mass_mev <= 0.0 {
            return Err(at(MassError::Invalid(format!("mass must be positive, got {}", &rec[1]))));
        }
        let qn = QuantumNumbers::new(opt(&rec[2]).map_err(at)?, opt(&rec[3]).map_err(at)?, opt(&rec[4]).map_err(at)?)
            .map_err(at)?;
        if !qn.half_integral() {
            return Err(at(MassError::Invalid("quantum numbers must be half-integral".into())));
        }
        rows.push(ParticleRow {
            name: rec[0].to_string(),
            mass_mev,
            qn,
            multiplet: rec[5].to_string(),
        });
    }
    Ok(rows)
}

/// Least-squares fit result; residuals are in the formula's target units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub kind: FormulaKind,
    pub coeffs: BTreeMap<String, f64>,
    pub residuals: Vec<f64>,
    pub rms: f64,
}

impl FitReport {
    /// Coefficients in `kind.params()` order.
    pub fn coeff_vec(&self) -> Vec<f64> {
        self.kind.params().iter().map(|p| self.coeffs[*p]).collect()
    }
}

/// Ordinary least squares on the formula's linear parameters.
pub fn fit_formula(rows: &[ParticleRow], kind: FormulaKind) -> Result<FitReport, MassError> {
    let p = kind.params().len();
    if rows.len() < p {
        return Err(MassError::TooFewRows { needed: p, got: rows.len() });
    }
    let mut x = DMatrix::<f64>::zeros(rows.len(), p);
    let mut y = DVector::<f64>::zeros(rows.len());
    for (i, row) in rows.iter().enumerate() {
        for (k, b) in kind.basis(&row.qn)?.iter().enumerate() {
            x[(i, k)] = q_to_f64(b);
        }
        y[i] = match kind.target() {
            Target::Mass => row.mass_mev,
            Target::MassSquared => row.mass_mev * row.mass_mev,
        };
    }
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let tol = smax * 1e-10 * rows.len().max(p) as f64;
    let rank = svd.singular_values.iter().filter(|s| **s > tol).count();
    if rank < p {
        return Err(MassError::RankDeficient { rank, columns: p });
    }
    let beta = svd.solve(&y, tol).map_err(|e| MassError::Invalid(e.to_string()))?;
    let resid = &y - &x * &beta;
    let residuals: Vec<f64> = resid.iter().copied().collect();
    let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();
    let coeffs = kind.params().iter().zip(beta.iter()).map(|(n, v)| (n.to_string(), *v)).collect();
    Ok(FitReport { kind, coeffs, residuals, rms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::masslab::MassFormula;
    use crate::scalar::{q, qf};

    const OCTET: &str = "\
# baryon octet
name,mass_mev,Y,J,S,multiplet
N,938.9,1,1/2,1/2,octet
Lambda,1115.7,0,0,0.5,octet
Sigma,1193.2,0,1,1/2,octet
Xi,1318.3,-1,0.5,1/2,octet
";

    #[test]
    fn reads_table() {
        let rows = read_particle_table(OCTET.as_bytes()).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[1].qn.j, Some(q(0)));
        assert_eq!(rows[3].qn.j, Some(qf(1, 2)));
        assert_eq!(rows[0].multiplet, "octet");
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(read_particle_table("name,mass,Y,J,S,multiplet\n".as_bytes()).is_err());
        let neg = "name,mass_mev,Y,J,S,multiplet\nx,-1,0,0,0,m\n";
        assert!(read_particle_table(neg.as_bytes()).is_err());
        let third = "name,mass_mev,Y,J,S,multiplet\nx,1,1/3,0,0,m\n";
        assert!(read_particle_table(third.as_bytes()).is_err());
    }

    fn synthetic(kind: FormulaKind, coeffs: &[f64], qns: &[QuantumNumbers]) -> Vec<ParticleRow> {
        let f = MassFormula::new(kind, coeffs.to_vec()).unwrap();
        qns.iter()
            .enumerate()
            .map(|(i, qn)| ParticleRow {
                name: format!("p{i}"),
                mass_mev: f.eval(qn).unwrap().mass,
                qn: *qn,
                multiplet: "syn".into(),
            })
            .collect()
    }

    #[test]
    fn octet_recovery() {
        let qns = [
            QuantumNumbers::yj(q(1), qf(1, 2)),
            QuantumNumbers::yj(q(-1), qf(1, 2)),
            QuantumNumbers::yj(q(0), q(0)),
            QuantumNumbers::yj(q(0), q(1)),
        ];
        let truth = [1100.0, -190.0, 40.0];
        let rows = synthetic(FormulaKind::OkuboHadron, &truth, &qns);
        let fit = fit_formula(&rows, FormulaKind::OkuboHadron).unwrap();
        for (got, want) in fit.coeff_vec().iter().zip(truth) {
            assert!(((got - want) / want).abs() < 1e-9, "{got} vs {want}");
        }
        assert!(fit.rms < 1e-9);
    }

    #[test]
    fn degenerate_table_is_rank_deficient() {
        let qns = vec![QuantumNumbers::yj(q(0), q(0)); 4];
        let rows = synthetic(FormulaKind::OkuboHadron, &[1.0, 0.0, 0.0], &qns);
        assert!(matches!(
            fit_formula(&rows, FormulaKind::OkuboHadron),
            Err(MassError::RankDeficient { rank: 1, columns: 3 })
        ));
        assert!(matches!(
            fit_formula(&rows[..2], FormulaKind::OkuboHadron),
            Err(MassError::TooFewRows { .. })
        ));
    }
}
