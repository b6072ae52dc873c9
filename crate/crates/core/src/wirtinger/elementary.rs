//! Principal-branch elementary functions lifted to jets.

use super::{Complex, Jet, JetError, BRANCH_CUT_EPS};

/// Elementary functions available on jets and in the expression language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Elementary {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
}

impl Elementary {
    pub const ALL: [Elementary; 8] = [
        Elementary::Exp,
        Elementary::Log,
        Elementary::Sin,
        Elementary::Cos,
        Elementary::Sinh,
        Elementary::Cosh,
        Elementary::Tanh,
        Elementary::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Log => "log",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
            Elementary::Tanh => "tanh",
            Elementary::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Point value on the principal branch.
    pub fn eval(self, w: Complex) -> Result<Complex, JetError> {
        Ok(self.derivatives(w)?[0])
    }

    /// `[h, h', h'', h''']` at `w`.
    pub fn derivatives(self, w: Complex) -> Result<[Complex; 4], JetError> {
        let one = Complex::new(1.0, 0.0);
        Ok(match self {
            Elementary::Exp => {
                let e = w.exp();
                [e; 4]
            }
            Elementary::Log => {
                check_branch(w)?;
                let r = w.inv();
                [w.ln(), r, -r * r, 2.0 * r * r * r]
            }
            Elementary::Sqrt => {
                check_branch(w)?;
                let s = w.sqrt();
                let r = w.inv();
                let d1 = 0.5 / s;
                [s, d1, -0.5 * d1 * r, 0.75 * d1 * r * r]
            }
            Elementary::Sin => {
                let (s, c) = (w.sin(), w.cos());
                [s, c, -s, -c]
            }
            Elementary::Cos => {
                let (s, c) = (w.sin(), w.cos());
                [c, -s, -c, s]
            }
            Elementary::Sinh => {
                let (s, c) = (w.sinh(), w.cosh());
                [s, c, s, c]
            }
            Elementary::Cosh => {
                let (s, c) = (w.sinh(), w.cosh());
                [c, s, c, s]
            }
            Elementary::Tanh => {
                let t = w.tanh();
                let sech2 = one - t * t;
                [t, sech2, -2.0 * t * sech2, sech2 * (6.0 * t * t - 2.0)]
            }
        })
    }

    pub fn apply(self, arg: &Jet) -> Result<Jet, JetError> {
        Ok(arg.compose(self.derivatives(arg.value())?))
    }
}

/// Rejects arguments on the closed negative real axis (including 0) within the branch tolerance.
fn check_branch(w: Complex) -> Result<(), JetError> {
    if w.im.abs() < BRANCH_CUT_EPS && w.re <= BRANCH_CUT_EPS {
        Err(JetError::BranchCut)
    } else {
        Ok(())
    }
}

impl Jet {
    pub fn exp(&self) -> Jet {
        Elementary::Exp.apply(self).expect("exp is entire")
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        Elementary::Log.apply(self)
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        Elementary::Sqrt.apply(self)
    }

    pub fn sin(&self) -> Jet {
        Elementary::Sin.apply(self).expect("sin is entire")
    }

    pub fn cos(&self) -> Jet {
        Elementary::Cos.apply(self).expect("cos is entire")
    }
}
