//! Parallel exhaustive enumeration and the three-way polynomial cross-check.

use rayon::prelude::*;
use thiserror::Error;
use zkdistill_core::distillation::{cisc_acceptance, cisc_output_error, DistillationError};
use zkdistill_core::protosim::{
    build_distillation_circuit, macwilliams_fastpath, CliffordCircuit, EnumerationError, Fault, ProtocolPolynomials,
    Readout, SiteTable, Tally, TemplateError, MAX_EXHAUSTIVE_LIMIT,
};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{0}")]
    Enumeration(EnumerationError),
    #[error("{0}")]
    Distillation(DistillationError),
    #[error("{0}")]
    Template(TemplateError),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl From<EnumerationError> for OracleError {
    fn from(e: EnumerationError) -> Self {
        OracleError::Enumeration(e)
    }
}

impl From<DistillationError> for OracleError {
    fn from(e: DistillationError) -> Self {
        OracleError::Distillation(e)
    }
}

/// `None` uses all available cores.
pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, OracleError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        b = b.num_threads(t.max(1));
    }
    b.build().map_err(|e| OracleError::Pool(e.to_string()))
}

/// Exhaustive enumeration with the pattern space split into contiguous
/// ranges tallied in parallel; merging is order-independent.
pub fn enumerate_parallel(
    circuit: &CliffordCircuit,
    sites: &[Fault],
    readout: &Readout,
    limit: usize,
    threads: Option<usize>,
) -> Result<ProtocolPolynomials, OracleError> {
    let limit = limit.min(MAX_EXHAUSTIVE_LIMIT);
    if sites.len() > limit {
        return Err(EnumerationError::TooManySites { sites: sites.len(), limit }.into());
    }
    let table = SiteTable::new(circuit, sites, readout)?;
    let pool = thread_pool(threads)?;
    let parts = pool.current_num_threads() * 8;
    let ranges = table.partition(parts);
    let partials: Vec<Tally> = pool.install(|| {
        ranges
            .par_iter()
            .map(|&(s, e)| table.tally_range(s, e))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut total = Tally::zero(sites.len());
    for p in &partials {
        total.merge(p);
    }
    Ok(total.into_polynomials())
}

/// Agreement of the closed form, the dual-sum fast path and (when within the
/// site limit) circuit-level enumeration for one `k`.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub k: u32,
    pub fast_path_matches: bool,
    /// `None` when the circuit has more error sites than the limit.
    pub enumeration_matches: Option<bool>,
    pub sites: usize,
}

impl VerifyReport {
    pub fn agreed(&self) -> bool {
        self.fast_path_matches && self.enumeration_matches.unwrap_or(true)
    }
}

fn matches(p: &ProtocolPolynomials, k: u32) -> Result<bool, OracleError> {
    Ok(p.output_error == cisc_output_error(k)? && p.acceptance == cisc_acceptance(k)?)
}

pub fn verify(k: u32, limit: usize, threads: Option<usize>) -> Result<VerifyReport, OracleError> {
    let fast = macwilliams_fastpath(k)?;
    let fast_path_matches = matches(&fast, k)?;
    let d = build_distillation_circuit(k).map_err(OracleError::Template)?;
    let sites = d.error_sites();
    let enumeration_matches = if sites.len() <= limit.min(MAX_EXHAUSTIVE_LIMIT) {
        let p = enumerate_parallel(&d.circuit, &sites, &d.readout(), limit, threads)?;
        Some(matches(&p, k)?)
    } else {
        None
    };
    Ok(VerifyReport { k, fast_path_matches, enumeration_matches, sites: sites.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use zkdistill_core::protosim::{enumerate_protocol, DEFAULT_EXHAUSTIVE_LIMIT};

    #[test]
    fn parallel_equals_sequential() {
        let d = build_distillation_circuit(2).unwrap();
        let seq = enumerate_protocol(&d.circuit, &d.error_sites(), &d.readout(), DEFAULT_EXHAUSTIVE_LIMIT).unwrap();
        for threads in [1, 3] {
            let par = enumerate_parallel(&d.circuit, &d.error_sites(), &d.readout(), 25, Some(threads)).unwrap();
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn verify_k2_and_k3() {
        let r = verify(2, DEFAULT_EXHAUSTIVE_LIMIT, None).unwrap();
        assert_eq!(r.enumeration_matches, Some(true));
        assert!(r.agreed());
        let r = verify(3, DEFAULT_EXHAUSTIVE_LIMIT, None).unwrap();
        assert_eq!(r.enumeration_matches, None);
        assert!(r.fast_path_matches);
    }
}
