//! Serializable views of results. Exact rationals are written as decimal
//! strings, `{"num": "...", "den": "..."}`, so no precision is lost in JSON.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use zkdistill_core::poly::{Polynomial, RationalFunction};
use zkdistill_core::resources::ResourceEstimate;

pub const SWEEP_CSV_HEADER: &str = "architecture,k,eps,eps_target,levels,expected_states,distiller,mode";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        Self { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Option<BigRational> {
        let num: BigInt = self.num.parse().ok()?;
        let den: BigInt = self.den.parse().ok()?;
        (den != BigInt::from(0)).then(|| BigRational::new(num, den))
    }
}

/// Polynomial in `ε` as ascending coefficient strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson(pub Vec<String>);

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        Self(p.coeffs().iter().map(|c| c.to_string()).collect())
    }
}

impl PolynomialJson {
    pub fn to_polynomial(&self) -> Option<Polynomial> {
        let coeffs = self.0.iter().map(|s| s.parse::<BigInt>().ok()).collect::<Option<Vec<_>>>()?;
        Some(Polynomial::from_coeffs(coeffs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionJson {
    pub numerator: PolynomialJson,
    pub denominator: PolynomialJson,
}

impl From<&RationalFunction> for RationalFunctionJson {
    fn from(f: &RationalFunction) -> Self {
        Self { numerator: f.numerator().into(), denominator: f.denominator().into() }
    }
}

impl RationalFunctionJson {
    pub fn to_function(&self) -> Option<RationalFunction> {
        RationalFunction::new(self.numerator.to_polynomial()?, self.denominator.to_polynomial()?).ok()
    }
}

/// One sweep or estimate row, in CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub architecture: String,
    pub k: Option<u32>,
    pub eps: f64,
    pub eps_target: f64,
    pub levels: usize,
    pub expected_states: f64,
    pub distiller: String,
    pub mode: String,
}

impl From<&ResourceEstimate> for EstimateRow {
    fn from(e: &ResourceEstimate) -> Self {
        Self {
            architecture: e.architecture.as_str().into(),
            k: e.k,
            eps: e.eps,
            eps_target: e.eps_target,
            levels: e.levels,
            expected_states: e.expected_states,
            distiller: e.distiller_label.clone(),
            mode: e.count_mode.as_str().into(),
        }
    }
}

pub fn rows_to_csv(rows: &[EstimateRow]) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(SWEEP_CSV_HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<EstimateRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use zkdistill_core::distillation::cisc_output_error;
    use zkdistill_core::resources::{sweep, CountMode, ErrorBudget};
    use zkdistill_core::distillation::DistillationStepModel;

    #[test]
    fn rational_round_trip() {
        let r = BigRational::new(BigInt::from(-35), BigInt::from(3));
        let j = RationalJson::from(&r);
        assert_eq!(j, RationalJson { num: "-35".into(), den: "3".into() });
        let back: RationalJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back.to_rational(), Some(r));
    }

    #[test]
    fn rational_function_round_trip() {
        let f = cisc_output_error(3).unwrap();
        let j = RationalFunctionJson::from(&f);
        let text = serde_json::to_string(&j).unwrap();
        let back: RationalFunctionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_function().unwrap(), f);
    }

    #[test]
    fn csv_header_and_round_trip() {
        let est = sweep(&[3], 1e-4, &[1e-6, 1e-12], &ErrorBudget::default(), &[DistillationStepModel::qrm15()], CountMode::Paper)
            .unwrap();
        let rows: Vec<EstimateRow> = est.iter().map(EstimateRow::from).collect();
        let text = rows_to_csv(&rows).unwrap();
        assert_eq!(text.lines().next().unwrap(), SWEEP_CSV_HEADER);
        assert_eq!(rows_from_csv(&text).unwrap(), rows);
        assert_eq!(rows_to_csv(&[]).unwrap().trim_end(), SWEEP_CSV_HEADER);
    }
}
