//! Scenario configuration: TOML schema and validation.
//!
//! Parsing is strict (unknown fields are rejected with the offending key
//! named), and `ScenarioConfig::validate` checks every semantic rule,
//! returning one message per problem so a bad file is diagnosed in a
//! single pass. Messages name the field path (`run.dt`, `init.beams[1]`)
//! they refer to.

use serde::Deserialize;
use std::path::PathBuf;

/// Schema revision this build reads.
pub const SCHEMA_VERSION: u32 = 1;

/// The seven scenario kinds, in catalog order.
pub const KINDS: [&str; 7] = [
    "closure-verify",
    "bgk-run",
    "nr-limit",
    "ur-limit",
    "euler-limit",
    "linearized-diag",
    "semigroup",
];

fn default_one() -> usize {
    1
}
fn default_one_f() -> f64 {
    1.0
}
fn default_true() -> bool {
    true
}
fn default_identity_tol() -> f64 {
    1e-7
}
fn default_fit_tol() -> f64 {
    1e-6
}
fn default_free_energy_tol() -> f64 {
    1e-9
}
fn default_collision() -> String {
    "linear".to_string()
}
fn default_splitting() -> String {
    "lie".to_string()
}
fn default_entropy_rise_tol() -> f64 {
    1e-12
}
fn default_nr_order() -> f64 {
    1.7
}
fn default_ur_order() -> f64 {
    0.8
}
fn default_gamma_order() -> f64 {
    1.9
}
fn default_ep_tol() -> f64 {
    1e-6
}
fn default_euler_entropy_tol() -> f64 {
    1e-8
}
fn default_check_tol() -> f64 {
    1e-10
}
fn default_kernel_tol() -> f64 {
    1e-9
}
fn default_svd_gap_orders() -> f64 {
    6.0
}
fn default_random_checks() -> usize {
    20
}
fn default_random_radius() -> f64 {
    10.0
}
fn default_growth_tol() -> f64 {
    1e-10
}

/// Root scenario document.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    /// One of [`KINDS`].
    pub kind: String,
    /// Short identifier; the default output directory is `out/<name>`.
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub grid: Option<GridSpec>,
    pub closure: Option<ClosureSection>,
    pub run: Option<RunSection>,
    pub init: Option<InitSection>,
    pub nr: Option<NrSection>,
    pub ur: Option<UrSection>,
    pub euler: Option<EulerSection>,
    pub diag: Option<DiagSection>,
    pub modes: Option<ModesSection>,
}

/// Momentum lattice specification: either an explicit (cutoff, nodes)
/// pair or automatic sizing to a requested relative tolerance.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub cutoff: Option<f64>,
    pub nodes: Option<usize>,
    /// Relative moment tolerance for automatic sizing (used only when
    /// cutoff/nodes are omitted); default 1e-8.
    pub auto_tol: Option<f64>,
    #[serde(default = "default_one")]
    pub x_cells: usize,
    #[serde(default = "default_one_f")]
    pub length: f64,
}

/// One Juttner parameter triple, optionally with its own grid.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub density: f64,
    pub beta: f64,
    pub velocity: [f64; 3],
    pub cutoff: Option<f64>,
    pub nodes: Option<usize>,
}

/// closure-verify: Bessel identities, equilibrium moment identities,
/// closure fixed-point recovery, and the free-energy minimum principle.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureSection {
    #[serde(default = "default_identity_tol")]
    pub identity_tol: f64,
    #[serde(default = "default_fit_tol")]
    pub fit_tol: f64,
    /// Run the Bessel recurrence / monotonicity / inverse round-trip
    /// ladder (fixed tolerances 1e-10 and 1e-8).
    #[serde(default = "default_true")]
    pub bessel_suite: bool,
    /// Number of seeded random positive densities for the free-energy
    /// check; 0 disables it. Uses the shared [grid] and the first state
    /// as envelope.
    #[serde(default)]
    pub free_energy_seeds: usize,
    #[serde(default = "default_free_energy_tol")]
    pub free_energy_tol: f64,
    pub states: Vec<StateSpec>,
}

/// bgk-run: time controls for the split-step solver.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub epsilon: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Per-cell macroscopic states are recorded every this many steps
    /// (0 disables macro.csv; the ledger is always per step).
    #[serde(default)]
    pub cadence: usize,
    /// "linear" (exactly conservative) or "exponential" (exact pointwise
    /// decay).
    #[serde(default = "default_collision")]
    pub collision: String,
    /// "lie" or "strang".
    #[serde(default = "default_splitting")]
    pub splitting: String,
    #[serde(default = "default_one_f")]
    pub cfl_limit: f64,
    /// Bound on the relative drift of the five conserved totals over the
    /// whole run; defaults to 1e-8 in linear mode, unenforced otherwise.
    pub conservation_tol: Option<f64>,
    /// Bound on the per-step relative drift; defaults to 1.3e-12 in
    /// exponential mode, unenforced otherwise.
    pub step_drift_tol: Option<f64>,
    /// Largest allowed per-step rise of H (roundoff allowance).
    #[serde(default = "default_entropy_rise_tol")]
    pub entropy_rise_tol: f64,
}

/// bgk-run initial data.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSection {
    /// "two-beam" (homogeneous, needs exactly two [[init.beams]]) or
    /// "wave-column" (built-in smooth periodic profile over x_cells).
    pub kind: String,
    #[serde(default)]
    pub beams: Vec<StateSpec>,
}

/// nr-limit: classical reference state and the epsilon ladder. The
/// study runs on its own scaled-momentum grid, so no [grid] is used.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NrSection {
    pub density: f64,
    pub velocity: [f64; 3],
    pub temperature: f64,
    pub epsilons: Vec<f64>,
    pub qbar_cutoff: f64,
    pub nodes: usize,
    /// Minimum fitted convergence order for both ladder columns.
    #[serde(default = "default_nr_order")]
    pub min_order: f64,
}

/// ur-limit: massless reference state and the epsilon ladder.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UrSection {
    pub density: f64,
    pub beta: f64,
    pub velocity: [f64; 3],
    pub epsilons: Vec<f64>,
    /// Bound on |beta_f Psi(beta_f) - 3| at the smallest epsilon.
    #[serde(default = "default_ep_tol")]
    pub energy_pressure_tol: f64,
    #[serde(default = "default_ur_order")]
    pub min_order: f64,
}

/// euler-limit: relaxation ladder on the smooth 1D column.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerSection {
    pub epsilons: Vec<f64>,
    pub t_end: f64,
    pub cfl: f64,
    pub probes: usize,
    /// Bound on the kinetic entropy audit at the smallest epsilon.
    #[serde(default = "default_euler_entropy_tol")]
    pub entropy_tol: f64,
}

/// linearized-diag optional quadratic-remainder ladder (matrix-free, so
/// it may use a much larger grid than the dense diagnostics).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSub {
    pub cutoff: f64,
    pub nodes: usize,
    pub ladder: Vec<f64>,
    #[serde(default = "default_gamma_order")]
    pub min_order: f64,
}

/// linearized-diag: dense operator algebra about a global equilibrium.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagSection {
    pub beta0: f64,
    /// Random vectors for the dissipation-identity check.
    #[serde(default = "default_random_checks")]
    pub random_checks: usize,
    #[serde(default = "default_check_tol")]
    pub check_tol: f64,
    /// Tolerance for kernel-form vs assembled compact part.
    #[serde(default = "default_kernel_tol")]
    pub kernel_tol: f64,
    /// Required rank gap, in decades, between singular values 5 and 6 of
    /// the projector.
    #[serde(default = "default_svd_gap_orders")]
    pub svd_gap_orders: f64,
    /// Export the linearized operator and projector in the dense binary
    /// layout.
    #[serde(default)]
    pub dump_matrices: bool,
    /// Compute and dump the full (real) spectrum of the symmetrized
    /// operator.
    #[serde(default = "default_true")]
    pub spectrum: bool,
    pub gamma: Option<GammaSub>,
}

/// semigroup: Fourier-mode contraction runs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesSection {
    pub beta0: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Explicit frequencies, evolved before any random ones.
    #[serde(default)]
    pub zetas: Vec<[f64; 3]>,
    /// Random frequencies drawn uniformly from the ball of radius
    /// `random_radius`.
    #[serde(default)]
    pub random_count: usize,
    #[serde(default = "default_random_radius")]
    pub random_radius: f64,
    /// Append the zeta = 0 mode with invariant-spanned initial data and
    /// check it is exactly stationary.
    #[serde(default = "default_true")]
    pub include_zero: bool,
    /// Allowed relative norm growth (roundoff allowance).
    #[serde(default = "default_growth_tol")]
    pub growth_tol: f64,
}

fn check_state(prefix: &str, s: &StateSpec, issues: &mut Vec<String>) {
    if !(s.density > 0.0 && s.density.is_finite()) {
        issues.push(format!("{prefix}.density: must be positive, got {}", s.density));
    }
    if !(s.beta > 0.0 && s.beta.is_finite()) {
        issues.push(format!("{prefix}.beta: must be positive, got {}", s.beta));
    }
    if s.velocity.iter().any(|v| !v.is_finite()) {
        issues.push(format!("{prefix}.velocity: components must be finite"));
    }
    match (s.cutoff, s.nodes) {
        (Some(c), Some(n)) => {
            if !(c > 0.0 && c.is_finite()) {
                issues.push(format!("{prefix}.cutoff: must be positive, got {c}"));
            }
            if n < 2 || n % 2 != 0 {
                issues.push(format!("{prefix}.nodes: must be even and >= 2, got {n}"));
            }
        }
        (None, None) => {}
        _ => issues.push(format!("{prefix}: cutoff and nodes must be given together")),
    }
}

fn check_epsilons(prefix: &str, eps: &[f64], issues: &mut Vec<String>) {
    if eps.len() < 2 {
        issues.push(format!("{prefix}: need at least 2 ladder values, got {}", eps.len()));
        return;
    }
    if eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        issues.push(format!("{prefix}: all values must be positive"));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        issues.push(format!("{prefix}: values must be strictly decreasing"));
    }
}

impl GridSpec {
    fn check(&self, issues: &mut Vec<String>) {
        match (self.cutoff, self.nodes) {
            (Some(c), Some(n)) => {
                if !(c > 0.0 && c.is_finite()) {
                    issues.push(format!("grid.cutoff: must be positive, got {c}"));
                }
                if n < 2 || n % 2 != 0 {
                    issues.push(format!("grid.nodes: must be even and >= 2, got {n}"));
                }
                if let Some(t) = self.auto_tol {
                    issues.push(format!(
                        "grid.auto_tol: conflicts with explicit cutoff/nodes (got {t})"
                    ));
                }
            }
            (None, None) => {
                if let Some(t) = self.auto_tol {
                    if !(t > 0.0 && t < 1.0) {
                        issues.push(format!("grid.auto_tol: must lie in (0, 1), got {t}"));
                    }
                }
            }
            _ => issues.push("grid: cutoff and nodes must be given together".to_string()),
        }
        if self.x_cells == 0 {
            issues.push("grid.x_cells: must be at least 1".to_string());
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            issues.push(format!("grid.length: must be positive, got {}", self.length));
        }
    }
}

impl ScenarioConfig {
    /// Collects every semantic problem, with field paths in the messages.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();

        if self.schema_version != SCHEMA_VERSION {
            issues.push(format!(
                "schema_version: this build reads version {SCHEMA_VERSION}, got {}",
                self.schema_version
            ));
        }
        if !KINDS.contains(&self.kind.as_str()) {
            issues.push(format!(
                "kind: unknown scenario kind `{}`; the catalog has {}",
                self.kind,
                KINDS.join(", ")
            ));
            return issues;
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            issues.push(format!(
                "name: must be a nonempty identifier without path separators, got `{}`",
                self.name
            ));
        }

        // Exactly the sections the kind uses may be present.
        let stray = |issues: &mut Vec<String>, present: bool, section: &str| {
            if present {
                issues.push(format!(
                    "{section}: section not used by kind `{}`",
                    self.kind
                ));
            }
        };
        let missing = |issues: &mut Vec<String>, absent: bool, section: &str| {
            if absent {
                issues.push(format!(
                    "{section}: section required by kind `{}` is missing",
                    self.kind
                ));
            }
        };

        match self.kind.as_str() {
            "closure-verify" => {
                missing(&mut issues, self.closure.is_none(), "closure");
                stray(&mut issues, self.run.is_some(), "run");
                stray(&mut issues, self.init.is_some(), "init");
                stray(&mut issues, self.nr.is_some(), "nr");
                stray(&mut issues, self.ur.is_some(), "ur");
                stray(&mut issues, self.euler.is_some(), "euler");
                stray(&mut issues, self.diag.is_some(), "diag");
                stray(&mut issues, self.modes.is_some(), "modes");
            }
            "bgk-run" => {
                missing(&mut issues, self.run.is_none(), "run");
                missing(&mut issues, self.init.is_none(), "init");
                missing(&mut issues, self.grid.is_none(), "grid");
                stray(&mut issues, self.closure.is_some(), "closure");
                stray(&mut issues, self.nr.is_some(), "nr");
                stray(&mut issues, self.ur.is_some(), "ur");
                stray(&mut issues, self.euler.is_some(), "euler");
                stray(&mut issues, self.diag.is_some(), "diag");
                stray(&mut issues, self.modes.is_some(), "modes");
            }
            "nr-limit" => {
                missing(&mut issues, self.nr.is_none(), "nr");
                stray(
                    &mut issues,
                    self.grid.is_some(),
                    "grid (nr-limit sizes its own scaled-momentum grid from nr.qbar_cutoff/nr.nodes)",
                );
                stray(&mut issues, self.closure.is_some(), "closure");
                stray(&mut issues, self.run.is_some(), "run");
                stray(&mut issues, self.init.is_some(), "init");
                stray(&mut issues, self.ur.is_some(), "ur");
                stray(&mut issues, self.euler.is_some(), "euler");
                stray(&mut issues, self.diag.is_some(), "diag");
                stray(&mut issues, self.modes.is_some(), "modes");
            }
            "ur-limit" => {
                missing(&mut issues, self.ur.is_none(), "ur");
                missing(&mut issues, self.grid.is_none(), "grid");
                stray(&mut issues, self.closure.is_some(), "closure");
                stray(&mut issues, self.run.is_some(), "run");
                stray(&mut issues, self.init.is_some(), "init");
                stray(&mut issues, self.nr.is_some(), "nr");
                stray(&mut issues, self.euler.is_some(), "euler");
                stray(&mut issues, self.diag.is_some(), "diag");
                stray(&mut issues, self.modes.is_some(), "modes");
            }
            "euler-limit" => {
                missing(&mut issues, self.euler.is_none(), "euler");
                missing(&mut issues, self.grid.is_none(), "grid");
                stray(&mut issues, self.closure.is_some(), "closure");
                stray(&mut issues, self.run.is_some(), "run");
                stray(&mut issues, self.init.is_some(), "init");
                stray(&mut issues, self.nr.is_some(), "nr");
                stray(&mut issues, self.ur.is_some(), "ur");
                stray(&mut issues, self.diag.is_some(), "diag");
                stray(&mut issues, self.modes.is_some(), "modes");
            }
            "linearized-diag" => {
                missing(&mut issues, self.diag.is_none(), "diag");
                missing(&mut issues, self.grid.is_none(), "grid");
                stray(&mut issues, self.closure.is_some(), "closure");
                stray(&mut issues, self.run.is_some(), "run");
                stray(&mut issues, self.init.is_some(), "init");
                stray(&mut issues, self.nr.is_some(), "nr");
                stray(&mut issues, self.ur.is_some(), "ur");
                stray(&mut issues, self.euler.is_some(), "euler");
                stray(&mut issues, self.modes.is_some(), "modes");
            }
            "semigroup" => {
                missing(&mut issues, self.modes.is_none(), "modes");
                missing(&mut issues, self.grid.is_none(), "grid");
                stray(&mut issues, self.closure.is_some(), "closure");
                stray(&mut issues, self.run.is_some(), "run");
                stray(&mut issues, self.init.is_some(), "init");
                stray(&mut issues, self.nr.is_some(), "nr");
                stray(&mut issues, self.ur.is_some(), "ur");
                stray(&mut issues, self.euler.is_some(), "euler");
                stray(&mut issues, self.diag.is_some(), "diag");
            }
            _ => unreachable!("kind membership checked above"),
        }

        if let Some(g) = &self.grid {
            g.check(&mut issues);
        }

        match self.kind.as_str() {
            "closure-verify" => self.validate_closure(&mut issues),
            "bgk-run" => self.validate_bgk(&mut issues),
            "nr-limit" => self.validate_nr(&mut issues),
            "ur-limit" => self.validate_ur(&mut issues),
            "euler-limit" => self.validate_euler(&mut issues),
            "linearized-diag" => self.validate_diag(&mut issues),
            "semigroup" => self.validate_modes(&mut issues),
            _ => unreachable!(),
        }

        issues
    }

    fn validate_closure(&self, issues: &mut Vec<String>) {
        let Some(c) = &self.closure else { return };
        if c.states.is_empty() {
            issues.push("closure.states: need at least one state".to_string());
        }
        for (i, s) in c.states.iter().enumerate() {
            check_state(&format!("closure.states[{i}]"), s, issues);
            if s.cutoff.is_none() && s.nodes.is_none() && self.grid.is_none() {
                issues.push(format!(
                    "closure.states[{i}]: no per-state grid and no shared [grid] section"
                ));
            }
        }
        for (key, tol) in [
            ("identity_tol", c.identity_tol),
            ("fit_tol", c.fit_tol),
            ("free_energy_tol", c.free_energy_tol),
        ] {
            if !(tol > 0.0 && tol.is_finite()) {
                issues.push(format!("closure.{key}: must be positive, got {tol}"));
            }
        }
        if c.free_energy_seeds > 0 && self.grid.is_none() {
            issues.push(
                "closure.free_energy_seeds: the free-energy check needs a shared [grid] section"
                    .to_string(),
            );
        }
    }

    fn validate_bgk(&self, issues: &mut Vec<String>) {
        let (Some(r), Some(init)) = (&self.run, &self.init) else { return };
        if !(r.epsilon > 0.0 && r.epsilon.is_finite()) {
            issues.push(format!("run.epsilon: must be positive, got {}", r.epsilon));
        }
        if !(r.dt > 0.0 && r.dt.is_finite()) {
            issues.push(format!("run.dt: must be positive, got {}", r.dt));
        }
        if !(r.t_end > 0.0 && r.t_end.is_finite()) {
            issues.push(format!("run.t_end: must be positive, got {}", r.t_end));
        }
        if !(r.cfl_limit > 0.0 && r.cfl_limit <= 1.0) {
            issues.push(format!("run.cfl_limit: must lie in (0, 1], got {}", r.cfl_limit));
        }
        if !matches!(r.collision.as_str(), "linear" | "exponential") {
            issues.push(format!(
                "run.collision: expected `linear` or `exponential`, got `{}`",
                r.collision
            ));
        }
        if !matches!(r.splitting.as_str(), "lie" | "strang") {
            issues.push(format!(
                "run.splitting: expected `lie` or `strang`, got `{}`",
                r.splitting
            ));
        }
        let x_cells = self.grid.as_ref().map_or(1, |g| g.x_cells);
        match init.kind.as_str() {
            "two-beam" => {
                if init.beams.len() != 2 {
                    issues.push(format!(
                        "init.beams: two-beam needs exactly 2 beams, got {}",
                        init.beams.len()
                    ));
                }
                if x_cells != 1 {
                    issues.push(format!(
                        "grid.x_cells: two-beam is homogeneous and needs x_cells = 1, got {x_cells}"
                    ));
                }
                for (i, b) in init.beams.iter().enumerate() {
                    let prefix = format!("init.beams[{i}]");
                    check_state(&prefix, b, issues);
                    if b.cutoff.is_some() || b.nodes.is_some() {
                        issues.push(format!("{prefix}: beams use the shared [grid], not their own"));
                    }
                }
            }
            "wave-column" => {
                if !init.beams.is_empty() {
                    issues.push("init.beams: wave-column takes no beams".to_string());
                }
                if x_cells < 2 {
                    issues.push(format!(
                        "grid.x_cells: wave-column needs at least 2 cells, got {x_cells}"
                    ));
                }
            }
            other => issues.push(format!(
                "init.kind: expected `two-beam` or `wave-column`, got `{other}`"
            )),
        }
    }

    fn validate_nr(&self, issues: &mut Vec<String>) {
        let Some(nr) = &self.nr else { return };
        if !(nr.density > 0.0 && nr.density.is_finite()) {
            issues.push(format!("nr.density: must be positive, got {}", nr.density));
        }
        if !(nr.temperature > 0.0 && nr.temperature.is_finite()) {
            issues.push(format!("nr.temperature: must be positive, got {}", nr.temperature));
        }
        if nr.velocity.iter().any(|v| !v.is_finite()) {
            issues.push("nr.velocity: components must be finite".to_string());
        }
        check_epsilons("nr.epsilons", &nr.epsilons, issues);
        if !(nr.qbar_cutoff > 0.0 && nr.qbar_cutoff.is_finite()) {
            issues.push(format!("nr.qbar_cutoff: must be positive, got {}", nr.qbar_cutoff));
        }
        if nr.nodes < 2 || nr.nodes % 2 != 0 {
            issues.push(format!("nr.nodes: must be even and >= 2, got {}", nr.nodes));
        }
        if !(nr.min_order > 0.0) {
            issues.push(format!("nr.min_order: must be positive, got {}", nr.min_order));
        }
    }

    fn validate_ur(&self, issues: &mut Vec<String>) {
        let Some(ur) = &self.ur else { return };
        if !(ur.density > 0.0 && ur.density.is_finite()) {
            issues.push(format!("ur.density: must be positive, got {}", ur.density));
        }
        if !(ur.beta > 0.0 && ur.beta.is_finite()) {
            issues.push(format!("ur.beta: must be positive, got {}", ur.beta));
        }
        let speed = ur.velocity.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !speed.is_finite() || speed >= 1.0 {
            issues.push(format!(
                "ur.velocity: massless drift speed must be below 1, got {speed}"
            ));
        }
        check_epsilons("ur.epsilons", &ur.epsilons, issues);
        if !(ur.energy_pressure_tol > 0.0) {
            issues.push(format!(
                "ur.energy_pressure_tol: must be positive, got {}",
                ur.energy_pressure_tol
            ));
        }
    }

    fn validate_euler(&self, issues: &mut Vec<String>) {
        let Some(e) = &self.euler else { return };
        check_epsilons("euler.epsilons", &e.epsilons, issues);
        if !(e.t_end > 0.0 && e.t_end.is_finite()) {
            issues.push(format!("euler.t_end: must be positive, got {}", e.t_end));
        }
        if !(e.cfl > 0.0 && e.cfl <= 1.0) {
            issues.push(format!("euler.cfl: must lie in (0, 1], got {}", e.cfl));
        }
        if e.probes == 0 {
            issues.push("euler.probes: must be at least 1".to_string());
        }
        if let Some(g) = &self.grid {
            if g.x_cells < 2 {
                issues.push(format!(
                    "grid.x_cells: euler-limit needs a spatial column, got {}",
                    g.x_cells
                ));
            }
        }
    }

    fn validate_diag(&self, issues: &mut Vec<String>) {
        let Some(d) = &self.diag else { return };
        if !(d.beta0 > 0.0 && d.beta0.is_finite()) {
            issues.push(format!("diag.beta0: must be positive, got {}", d.beta0));
        }
        for (key, tol) in [("check_tol", d.check_tol), ("kernel_tol", d.kernel_tol)] {
            if !(tol > 0.0 && tol.is_finite()) {
                issues.push(format!("diag.{key}: must be positive, got {tol}"));
            }
        }
        if !(d.svd_gap_orders > 0.0) {
            issues.push(format!(
                "diag.svd_gap_orders: must be positive, got {}",
                d.svd_gap_orders
            ));
        }
        if let Some(g) = &d.gamma {
            if !(g.cutoff > 0.0 && g.cutoff.is_finite()) {
                issues.push(format!("diag.gamma.cutoff: must be positive, got {}", g.cutoff));
            }
            if g.nodes < 2 || g.nodes % 2 != 0 {
                issues.push(format!("diag.gamma.nodes: must be even and >= 2, got {}", g.nodes));
            }
            check_epsilons("diag.gamma.ladder", &g.ladder, issues);
        }
    }

    fn validate_modes(&self, issues: &mut Vec<String>) {
        let Some(m) = &self.modes else { return };
        if !(m.beta0 > 0.0 && m.beta0.is_finite()) {
            issues.push(format!("modes.beta0: must be positive, got {}", m.beta0));
        }
        if !(m.t_end > 0.0 && m.t_end.is_finite()) {
            issues.push(format!("modes.t_end: must be positive, got {}", m.t_end));
        }
        if !(m.dt > 0.0 && m.dt.is_finite()) {
            issues.push(format!("modes.dt: must be positive, got {}", m.dt));
        }
        if !(m.random_radius > 0.0 && m.random_radius.is_finite()) {
            issues.push(format!(
                "modes.random_radius: must be positive, got {}",
                m.random_radius
            ));
        }
        for (i, z) in m.zetas.iter().enumerate() {
            if z.iter().any(|v| !v.is_finite()) {
                issues.push(format!("modes.zetas[{i}]: components must be finite"));
            }
        }
        if m.zetas.is_empty() && m.random_count == 0 && !m.include_zero {
            issues.push("modes: no frequencies requested (zetas, random_count and include_zero all empty)".to_string());
        }
        if !(m.growth_tol >= 0.0) {
            issues.push(format!("modes.growth_tol: must be nonnegative, got {}", m.growth_tol));
        }
    }
}
