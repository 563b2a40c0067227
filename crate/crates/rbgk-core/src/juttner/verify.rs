//! Streaming verification of the analytic moment identities of the
//! equilibrium family on a given grid.
//!
//! For parameters (n, beta, u) the exact continuum moments are
//!
//! ```text
//! N^mu           = n u^mu
//! T^{mu nu}      = n chi u^mu u^nu - (n / beta) g^{mu nu}
//! S^mu           = sigma u^mu,   sigma = n (beta Psi - ln(n / M))
//! int J dq / q0  = n K_1/K_2
//! e = n Psi,     p = n / beta
//! ```
//!
//! The battery integrates all required moments of the sampled distribution
//! in a single pass over the grid without storing a field, so it scales to
//! the very large certification grids, and reports each identity as a
//! relative residual. Residuals measure the grid's quadrature quality
//! (cutoff tail plus aliasing), since the integrands are known exactly.

use super::params::JuttnerParams;
use crate::bessel::ScalarKernels;
use crate::error::Result;
use crate::phase::grid::MomentumGrid;
use crate::phase::moments::grid_sums;

/// Relative residuals of the equilibrium moment identities on one grid.
#[derive(Debug, Clone, Copy)]
pub struct IdentityResiduals {
    /// N^mu vs n u^mu, component-wise (scaled by n u^0).
    pub current: [f64; 4],
    /// Rest density reconstructed from N^mu vs n.
    pub density: f64,
    /// u-frame energy density vs n Psi.
    pub energy: f64,
    /// Isotropic pressure vs n / beta.
    pub pressure: f64,
    /// Scalar moment int J/q^0 vs n K_1/K_2.
    pub alpha: f64,
    /// Stress tensor vs its closed form, Frobenius-relative.
    pub stress: f64,
    /// Entropy density vs sigma.
    pub entropy_scalar: f64,
    /// S^0 vs sigma u^0.
    pub entropy_time: f64,
    /// Spatial entropy flux vs sigma u (scaled by sigma u^0).
    pub entropy_space: f64,
}

impl IdentityResiduals {
    /// Largest of all reported residuals.
    pub fn max_all(&self) -> f64 {
        let mut m = self.density;
        for c in self.current {
            m = m.max(c);
        }
        m.max(self.energy)
            .max(self.pressure)
            .max(self.alpha)
            .max(self.stress)
            .max(self.entropy_scalar)
            .max(self.entropy_time)
            .max(self.entropy_space)
    }
}

/// Runs the identity battery for one parameter set on one grid.
pub fn equilibrium_identity_residuals(
    grid: &MomentumGrid,
    params: &JuttnerParams,
) -> Result<IdentityResiduals> {
    let sampler = params.sampler()?;
    // Nodes more than ~52 e-foldings below the peak cannot move any moment
    // at the 1e-15 level even with the polynomial weights; skip their exp.
    let floor = sampler.ln_amplitude() - 52.0;
    // Accumulator layout (all with the ln-first evaluation so the entropy
    // terms need no log calls):
    //  0: J/q0   1: J   2-4: (q/q0) J   5: q0 J   6-8: q J
    //  9-14: q_a q_b J / q0 (xx xy xz yy yz zz)
    // 15: J lnJ   16-18: (q/q0) J lnJ
    let s = grid_sums::<19>(grid, |q, q0| {
        let lnj = sampler.ln_value(q, q0);
        if lnj < floor {
            return [0.0; 19];
        }
        let j = lnj.exp();
        let jl = j * lnj;
        [
            j / q0,
            j,
            q[0] / q0 * j,
            q[1] / q0 * j,
            q[2] / q0 * j,
            q0 * j,
            q[0] * j,
            q[1] * j,
            q[2] * j,
            q[0] * q[0] / q0 * j,
            q[0] * q[1] / q0 * j,
            q[0] * q[2] / q0 * j,
            q[1] * q[1] / q0 * j,
            q[1] * q[2] / q0 * j,
            q[2] * q[2] / q0 * j,
            jl,
            q[0] / q0 * jl,
            q[1] / q0 * jl,
            q[2] / q0 * jl,
        ]
    });

    let n = params.density;
    let beta = params.beta;
    let u = params.velocity;
    let gamma = params.gamma();
    let kernels = ScalarKernels::new(beta)?;

    let current = [s[1], s[2], s[3], s[4]];
    let expect_current = [n * gamma, n * u[0], n * u[1], n * u[2]];
    let current_scale = n * gamma;
    let current_res = [
        (current[0] - expect_current[0]).abs() / current_scale,
        (current[1] - expect_current[1]).abs() / current_scale,
        (current[2] - expect_current[2]).abs() / current_scale,
        (current[3] - expect_current[3]).abs() / current_scale,
    ];

    let n_rec = (current[0] * current[0]
        - current[1] * current[1]
        - current[2] * current[2]
        - current[3] * current[3])
        .max(0.0)
        .sqrt();
    let density_res = (n_rec - n).abs() / n;

    let stress = [
        [s[5], s[6], s[7], s[8]],
        [s[6], s[9], s[10], s[11]],
        [s[7], s[10], s[12], s[13]],
        [s[8], s[11], s[13], s[14]],
    ];
    let expect_stress = params.stress()?;
    let mut frob_num = 0.0;
    let mut frob_den = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            frob_num += (stress[mu][nu] - expect_stress[mu][nu]).powi(2);
            frob_den += expect_stress[mu][nu].powi(2);
        }
    }
    let stress_res = (frob_num / frob_den).sqrt();

    let e_meas = crate::phase::moments::energy_density(&stress, u);
    let energy_res = (e_meas - n * kernels.psi).abs() / (n * kernels.psi);
    let p_meas = crate::phase::moments::pressure(&stress, u);
    let pressure_res = (p_meas - n / beta).abs() / (n / beta);

    let alpha_res = (s[0] - n * kernels.ratio).abs() / (n * kernels.ratio);

    let entropy_flux = [-s[15], -s[16], -s[17], -s[18]];
    let sigma = n * (beta * kernels.psi - (n.ln() - kernels.ln_norm));
    let sigma_meas = crate::phase::moments::entropy_density(&entropy_flux, u);
    let sigma_scale = sigma.abs().max(n);
    let entropy_scalar_res = (sigma_meas - sigma).abs() / sigma_scale;
    let entropy_time_res = (entropy_flux[0] - sigma * gamma).abs() / (sigma_scale * gamma);
    let mut space_num = 0.0f64;
    for d in 0..3 {
        space_num = space_num.max((entropy_flux[1 + d] - sigma * u[d]).abs());
    }
    let entropy_space_res = space_num / (sigma_scale * gamma);

    Ok(IdentityResiduals {
        current: current_res,
        density: density_res,
        energy: energy_res,
        pressure: pressure_res,
        alpha: alpha_res,
        stress: stress_res,
        entropy_scalar: entropy_scalar_res,
        entropy_time: entropy_time_res,
        entropy_space: entropy_space_res,
    })
}
