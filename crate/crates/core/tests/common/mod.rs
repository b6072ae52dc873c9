#![allow(dead_code)]

use std::path::PathBuf;

use surflab::exprlang::SurfaceConfig;
use surflab::surface_core::SurfaceData;
use surflab::wirtinger::Complex;

/// Expressions exercising the whole grammar, evaluated at points with `Re z ∈ [0.3, 2]`
/// and `|Im z| ≤ 1`.
pub const EXPRESSIONS: &[&str] = &[
    "z",
    "1",
    "2*z",
    "exp(-i*(z-1))/z^2",
    "-i*exp(-i*(z-1))/z^2",
    "exp(0.4*z)*(1 + z/3)",
    "z^3 - 2*z + 1",
    "sin(z)*cosh(z)",
    "cos(z) - sinh(z)^2",
    "tanh(z/2)",
    "log(z)",
    "sqrt(z)*exp(i*z)",
    "sinh(z)/(1 + z^2)",
    "(z + i)^-2",
    "exp(0.5*log(z))",
    "z*zbar",
    "conj(z)^2 + z",
    "re(z)*im(z)",
    "abs2(z) + exp(zbar)",
    "cos(zbar*z)",
    "z/(1 + abs2(z))",
    "sqrt(zbar + 2)*log(z)",
];

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub const CORPUS: &[&str] = &["enneper.toml", "butterfly.toml", "s1_minus.toml", "circle_2z.toml", "enneper_cmc.json"];

pub fn load(name: &str) -> (SurfaceConfig, SurfaceData) {
    let config = SurfaceConfig::load(&corpus_dir().join(name)).unwrap();
    let data = SurfaceData::from_config(&config).unwrap();
    (config, data)
}

/// Seeds on every singular component of the corpus surfaces.
pub fn seeds(name: &str) -> Vec<Complex> {
    match name {
        "butterfly.toml" | "s1_minus.toml" => vec![Complex::new(1.05, 0.0)],
        "circle_2z.toml" => vec![Complex::new(0.55, 0.0)],
        _ => vec![Complex::new(1.1, 0.0)],
    }
}

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}
