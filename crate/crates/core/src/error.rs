use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus N={0}: need N >= 2")]
    InvalidModulus(i64),

    #[error("invalid angle {0}: need 0 < |alpha| < pi")]
    InvalidAngle(f64),

    #[error("singular angle {alpha}: denominator sine vanishes at factor {factor}")]
    SingularAngle { alpha: f64, factor: usize },

    #[error("invalid sector m={m} for N={n}")]
    InvalidSector { m: i64, n: u32 },

    #[error("inconsistent weight vector: {0}")]
    InconsistentWeights(String),

    #[error("singular weight: W(omega^{q}) = {value:e} vanishes")]
    SingularWeight { q: u32, value: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("line arrangement is not simple: {0}")]
    NotSimple(String),

    #[error("triple point at {x:.6}+{y:.6}i: perturb the offsets")]
    TriplePoint { x: f64, y: f64 },

    #[error("faces do not form a flippable hexagon: {0}")]
    NotFlippable(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid disorder string: {0}")]
    InvalidString(String),

    #[error("enumeration needs {required} configurations, cap is {cap}")]
    BudgetExceeded { required: u128, cap: u64 },

    #[error("no weights assigned to primal edge {0}")]
    MissingWeights(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
