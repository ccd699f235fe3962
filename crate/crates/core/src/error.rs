use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is neither 0, a prime, nor a prime power")]
    BadModulus(u64),

    #[error("ν=(n+d)/n not an integer (n={n}, d={d})")]
    NonIntegerNu { n: usize, d: usize },

    #[error("hyperplane normals do not span the internal space")]
    NormalsDoNotSpan,

    #[error("projection is not injective on the lattice")]
    ProjectionNotInjective,

    #[error("malformed field data: {0}")]
    MalformedField(String),

    #[error("malformed scheme: {0}")]
    MalformedScheme(String),

    #[error("scheme file parse error: {0}")]
    Parse(String),

    #[error("point group element {index} does not preserve the hyperplane family")]
    PointGroupMismatch { index: usize },

    #[error("orbit cap exceeded: more than {cap} singular {dim}-space orbits (homology likely not finitely generated)")]
    OrbitCap { cap: usize, dim: usize },

    #[error("infinitely many intersection classes: the arrangement does not have finitely generated homology")]
    InfiniteIntersection,

    #[error("stabilizer of a singular {r}-space has rank {got}, expected {expected}")]
    StabilizerRank { r: usize, got: usize, expected: usize },

    #[error("unsupported scheme: {0}")]
    Unsupported(String),

    #[error("equivalence open for d ≥ 4: K-theory assembly refused (d={0})")]
    KTheoryDimension(usize),

    #[error("inconsistent mod-p data: T_{k}^{p} would be negative")]
    NegativeTorsionRank { k: usize, p: u64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
