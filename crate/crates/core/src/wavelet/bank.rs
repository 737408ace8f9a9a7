//! Orthogonal filter banks. Only the lowpass analysis taps are stored as
//! constants; the highpass and synthesis taps follow from the quadrature
//! mirror relations for orthogonal banks.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

const HAAR_LOW: [f64; 2] = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];

const DB4_LOW: [f64; 8] = [
    -0.010597401784997278,
    0.032883011666982945,
    0.030841381835986965,
    -0.18703481171888114,
    -0.02798376941698385,
    0.6308807679295904,
    0.7148465705525415,
    0.23037781330885523,
];

const SYM4_LOW: [f64; 8] = [
    -0.07576571478927333,
    -0.02963552764599851,
    0.49761866763201545,
    0.8037387518059161,
    0.29785779560527736,
    -0.09921954357684722,
    -0.012603967262037833,
    0.0322231006040427,
];

const COIF4_LOW: [f64; 24] = [
    -1.7849909162365493e-6,
    -3.2596479477917806e-6,
    3.1229861634177814e-5,
    6.233885436054876e-5,
    -2.5997433724835354e-4,
    -5.890202250943728e-4,
    1.2665610795339077e-3,
    3.751434699667243e-3,
    -5.658283804079985e-3,
    -1.5211728194437368e-2,
    2.50822533526195e-2,
    3.9334422614461274e-2,
    -9.6220424567217e-2,
    -6.662747237004582e-2,
    0.4343860331553923,
    0.7822389344174011,
    0.41530842696662357,
    -0.056077319592192164,
    -0.08126671023167664,
    0.026682304661798148,
    0.016068947126457803,
    -7.3461679335791435e-3,
    -1.6294924245756183e-3,
    8.923139021559022e-4,
];

/// The four supported orthogonal banks. Db4, Sym4 and Coif4 are the
/// 4-vanishing-moment members of their families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BankName {
    Haar,
    Db4,
    Sym4,
    Coif4,
}

impl BankName {
    pub const ALL: [BankName; 4] = [BankName::Haar, BankName::Db4, BankName::Sym4, BankName::Coif4];

    pub fn parse(s: &str) -> Option<BankName> {
        match s.to_ascii_lowercase().as_str() {
            "haar" => Some(BankName::Haar),
            "db4" => Some(BankName::Db4),
            "sym4" => Some(BankName::Sym4),
            "coif4" => Some(BankName::Coif4),
            _ => None,
        }
    }
}

impl std::fmt::Display for BankName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BankName::Haar => "haar",
            BankName::Db4 => "db4",
            BankName::Sym4 => "sym4",
            BankName::Coif4 => "coif4",
        })
    }
}

/// Analysis/synthesis tap pairs of one orthogonal bank.
#[derive(Debug, Clone)]
pub struct FilterBank {
    name: BankName,
    lowpass_analysis: Vec<f64>,
    highpass_analysis: Vec<f64>,
    lowpass_synthesis: Vec<f64>,
    highpass_synthesis: Vec<f64>,
}

impl FilterBank {
    pub fn new(name: BankName) -> FilterBank {
        let h: Vec<f64> = match name {
            BankName::Haar => HAAR_LOW.to_vec(),
            BankName::Db4 => DB4_LOW.to_vec(),
            BankName::Sym4 => SYM4_LOW.to_vec(),
            BankName::Coif4 => COIF4_LOW.to_vec(),
        };
        let l = h.len();
        // quadrature mirror: g[n] = (-1)^n h[L-1-n]
        let g: Vec<f64> = (0..l)
            .map(|n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sign * h[l - 1 - n]
            })
            .collect();
        let bank = FilterBank {
            name,
            lowpass_synthesis: h.iter().rev().copied().collect(),
            highpass_synthesis: g.iter().rev().copied().collect(),
            lowpass_analysis: h,
            highpass_analysis: g,
        };
        bank.validate();
        bank
    }

    // Transcription errors in the embedded taps fail loudly at construction.
    fn validate(&self) {
        let sum: f64 = self.lowpass_analysis.iter().sum();
        let energy: f64 = self.lowpass_analysis.iter().map(|v| v * v).sum();
        assert!(
            (sum - SQRT_2).abs() < 1e-10,
            "{}: lowpass taps sum to {sum}, want sqrt(2)",
            self.name
        );
        assert!(
            (energy - 1.0).abs() < 1e-10,
            "{}: lowpass tap energy is {energy}, want 1",
            self.name
        );
    }

    pub fn name(&self) -> BankName {
        self.name
    }

    pub fn len(&self) -> usize {
        self.lowpass_analysis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lowpass_analysis(&self) -> &[f64] {
        &self.lowpass_analysis
    }

    pub fn highpass_analysis(&self) -> &[f64] {
        &self.highpass_analysis
    }

    pub fn lowpass_synthesis(&self) -> &[f64] {
        &self.lowpass_synthesis
    }

    pub fn highpass_synthesis(&self) -> &[f64] {
        &self.highpass_synthesis
    }
}
