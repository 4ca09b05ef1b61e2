use crate::error::{Error, Result};

/// Thresholds that drive every numerical decision.
///
/// `cluster` and `unitarity` are base values: eigenvalues `w` of `A A*` are
/// grouped within `cluster * (1 + |w|)` (plus the roundoff floor of the
/// eigendecomposition) and the unitarity bound for an `N x N` factor is
/// `unitarity * sqrt(N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub eig_residual: f64,
    pub cluster: f64,
    pub unitarity: f64,
    pub reconstruct: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eig_residual: 1e-10, cluster: 1e-8, unitarity: 1e-10, reconstruct: 1e-9 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [self.eig_residual, self.cluster, self.unitarity, self.reconstruct];
        if all.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return Err(Error::Numerical(format!("tolerances must be positive and finite: {self:?}")));
        }
        if self.cluster < self.eig_residual {
            return Err(Error::Numerical(format!(
                "cluster tolerance {:e} below eigen-residual tolerance {:e}",
                self.cluster, self.eig_residual
            )));
        }
        Ok(())
    }

    /// Clustering radius around an eigenvalue of modulus `omega_abs`.
    pub fn cluster_radius(&self, omega_abs: f64) -> f64 {
        self.cluster * (1.0 + omega_abs)
    }

    pub fn unitarity_bound(&self, dim: usize) -> f64 {
        self.unitarity * (dim as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn rejects_cluster_below_residual() {
        let t = Tolerances { cluster: 1e-12, ..Default::default() };
        assert!(t.validate().is_err());
        let t = Tolerances { reconstruct: 0.0, ..Default::default() };
        assert!(t.validate().is_err());
    }
}
