use thiserror::Error;

/// Crate-wide error type. Variants are grouped by the subsystem that raises
/// them; the evolution kernel reports grid coordinates on failure so a bad
/// cell can be located in the (u, v) chart directly.
#[derive(Debug, Error)]
pub enum Error {
    // geometry
    #[error("|e| >= M: extremal or super-extremal charge (M = {m}, e = {e})")]
    ExtremalOrSuperextremal { m: f64, e: f64 },
    #[error("negative mass M = {0}")]
    NegativeMass(f64),
    #[error("custom metric function violates the required sign structure at r = {r}: {detail}")]
    CustomSignViolation { r: f64, detail: String },
    #[error("r = {r} is at or below the horizon r+ = {r_plus}")]
    BelowHorizon { r: f64, r_plus: f64 },
    #[error("tortoise value {rstar} lies outside the table domain [{lo}, {hi}]")]
    TableDomainExceeded { rstar: f64, lo: f64, hi: f64 },

    // initial data
    #[error("data support [{lo}, {hi}] does not fit inside the cone range ({v0}, {v_max})")]
    SupportOutsideGrid { lo: f64, hi: f64, v0: f64, v_max: f64 },
    #[error("mode index mismatch: {0} vs {1}")]
    ModeMismatch(u32, u32),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("junction mismatch at rho = R: spacelike phi = {spacelike}, cone phi = {cone}")]
    JunctionMismatch { spacelike: f64, cone: f64 },
    #[error("spacelike support touches the bifurcation sphere (h = 1/D is singular at r+)")]
    BifurcationSphereSupport,

    // np constants / time integral
    #[error("fewer than {needed} extraction radii available beyond r = {r_min}")]
    InsufficientRange { needed: usize, r_min: f64 },
    #[error("Newman-Penrose constant does not vanish: I0 = {i0} (tolerance {tol}); the time integral is not defined")]
    NonvanishingI0 { i0: f64, tol: f64 },
    #[error("r^3 d_r(r psi) has no finite limit along the cone (last samples {a}, {b})")]
    DivergentCubicLimit { a: f64, b: f64 },
    #[error("time-integral chain broken at order {k}: |I0^({k})| = {value} exceeds tolerance {tol}")]
    PreconditionChainBroken { k: u32, value: f64, tol: f64 },

    // evolution
    #[error("non-finite field value at (u, v) = ({u}, {v})")]
    NaNDetected { u: f64, v: f64 },
    #[error("cell count {cells} exceeds the configured budget {budget}")]
    BudgetExceeded { cells: u64, budget: u64 },
    #[error("no scri column was retained by the run; cannot sample the NP scalar")]
    ColumnNotRetained,

    // asymptotics
    #[error("field changes sign inside the fit window at tau = {0}")]
    SignChangeInWindow(f64),
    #[error("scenario '{0}' needs constant '{1}' which the NP report does not carry")]
    MissingConstant(String, String),
    #[error("fit window [{lo}, {hi}] spans less than one decade in tau")]
    WindowTooShort { lo: f64, hi: f64 },

    // cli / config
    #[error("config error at {path}: {detail}")]
    Config { path: String, detail: String },
    #[error("quadrature failed to converge on [{a}, {b}] (error estimate {err})")]
    QuadratureDivergent { a: f64, b: f64, err: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
