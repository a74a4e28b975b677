//! Touchstone v1 (`.s1p` / `.s2p`) reading and writing.
//!
//! Data is normalized to Hz and real/imaginary pairs on read. Two-port
//! samples are stored row-major (`S11, S12, S21, S22`); the file order
//! `S11, S21, S12, S22` is handled at the boundary.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use widematch_core::ladder::TwoPortData;
use widematch_core::network::TwoPort;
use widematch_core::rational::SampledResponse;
use widematch_core::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrequencyUnit {
    Hz,
    KHz,
    MHz,
    #[default]
    GHz,
}

impl FrequencyUnit {
    pub fn scale(self) -> f64 {
        match self {
            FrequencyUnit::Hz => 1.0,
            FrequencyUnit::KHz => 1e3,
            FrequencyUnit::MHz => 1e6,
            FrequencyUnit::GHz => 1e9,
        }
    }

    fn parse(token: &str) -> Option<Self> {
        match token.to_ascii_uppercase().as_str() {
            "HZ" => Some(FrequencyUnit::Hz),
            "KHZ" => Some(FrequencyUnit::KHz),
            "MHZ" => Some(FrequencyUnit::MHz),
            "GHZ" => Some(FrequencyUnit::GHz),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DataFormat {
    /// Real and imaginary parts.
    Ri,
    /// Linear magnitude and angle in degrees.
    #[default]
    Ma,
    /// Magnitude in dB and angle in degrees.
    Db,
}

impl DataFormat {
    fn parse(token: &str) -> Option<Self> {
        match token.to_ascii_uppercase().as_str() {
            "RI" => Some(DataFormat::Ri),
            "MA" => Some(DataFormat::Ma),
            "DB" => Some(DataFormat::Db),
            _ => None,
        }
    }

    fn decode(self, a: f64, b: f64) -> Complex64 {
        match self {
            DataFormat::Ri => Complex64::new(a, b),
            DataFormat::Ma => Complex64::from_polar(a, b.to_radians()),
            DataFormat::Db => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TouchstoneError {
    #[error("line {line}: malformed option line: {reason}")]
    MalformedOption { line: usize, reason: String },

    #[error("line {line}: frequency {frequency_hz} Hz is not above the previous one")]
    NonMonotone { line: usize, frequency_hz: f64 },

    #[error("line {line}: a {ports}-port row needs {expected} values, found {found}")]
    WrongPortCount {
        line: usize,
        ports: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: invalid number {token:?}")]
    InvalidNumber { line: usize, token: String },

    #[error("unsupported port count {0}; only one- and two-port files are handled")]
    UnsupportedPorts(usize),

    #[error("no data rows")]
    Empty,

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Sampled S-parameters of a one- or two-port.
#[derive(Debug, Clone, PartialEq)]
pub struct TouchstoneData {
    pub ports: usize,
    pub resistance: f64,
    /// Unit and format found in the source file; samples are already
    /// converted to Hz and complex values.
    pub unit: FrequencyUnit,
    pub format: DataFormat,
    pub frequencies: Vec<f64>,
    /// `ports * ports` entries per frequency, row-major.
    pub samples: Vec<Vec<Complex64>>,
}

impl TouchstoneData {
    pub fn from_two_port(data: &TwoPortData) -> Self {
        Self {
            ports: 2,
            resistance: data.z0,
            unit: FrequencyUnit::Hz,
            format: DataFormat::Ri,
            frequencies: data.frequencies.clone(),
            samples: data.parameters.iter().map(|p| vec![p.s11, p.s12, p.s21, p.s22]).collect(),
        }
    }

    pub fn two_ports(&self) -> Option<Vec<TwoPort>> {
        (self.ports == 2).then(|| {
            self.samples
                .iter()
                .map(|s| TwoPort { s11: s[0], s12: s[1], s21: s[2], s22: s[3] })
                .collect()
        })
    }

    /// The reflection samples of a one-port.
    pub fn one_port(&self) -> Option<SampledResponse> {
        if self.ports != 1 {
            return None;
        }
        SampledResponse::new(self.frequencies.clone(), self.samples.iter().map(|s| s[0]).collect()).ok()
    }

    /// Serializes as `# Hz S RI R <resistance>`. Values use the shortest
    /// representation that reads back to the same bits.
    pub fn to_ri_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "! {}-port S-parameters", self.ports);
        let _ = writeln!(out, "# Hz S RI R {}", self.resistance);
        for (f, s) in self.frequencies.iter().zip(&self.samples) {
            let _ = write!(out, "{f:e}");
            for v in file_order(self.ports, s) {
                let _ = write!(out, " {:e} {:e}", v.re, v.im);
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), TouchstoneError> {
        std::fs::write(path, self.to_ri_string()).map_err(|e| io_error(path, e))
    }
}

fn io_error(path: &Path, e: std::io::Error) -> TouchstoneError {
    TouchstoneError::Io { path: path.display().to_string(), message: e.to_string() }
}

fn file_order(ports: usize, s: &[Complex64]) -> Vec<Complex64> {
    match ports {
        2 => vec![s[0], s[2], s[1], s[3]],
        _ => s.to_vec(),
    }
}

struct Options {
    unit: FrequencyUnit,
    format: DataFormat,
    resistance: f64,
}

fn parse_options(body: &str, line: usize) -> Result<Options, TouchstoneError> {
    let bad = |reason: String| TouchstoneError::MalformedOption { line, reason };
    let mut opts = Options { unit: FrequencyUnit::default(), format: DataFormat::default(), resistance: 50.0 };
    let mut tokens = body.split_whitespace();
    while let Some(t) = tokens.next() {
        if let Some(u) = FrequencyUnit::parse(t) {
            opts.unit = u;
        } else if let Some(f) = DataFormat::parse(t) {
            opts.format = f;
        } else if t.eq_ignore_ascii_case("S") {
        } else if matches!(t.to_ascii_uppercase().as_str(), "Y" | "Z" | "H" | "G") {
            return Err(bad(format!("parameter type {t} is not supported")));
        } else if t.eq_ignore_ascii_case("R") {
            let v = tokens.next().ok_or_else(|| bad("R needs a value".into()))?;
            opts.resistance = v
                .parse::<f64>()
                .ok()
                .filter(|r| *r > 0.0 && r.is_finite())
                .ok_or_else(|| bad(format!("invalid resistance {v:?}")))?;
        } else {
            return Err(bad(format!("unknown token {t:?}")));
        }
    }
    Ok(opts)
}

/// Parses Touchstone v1 text for a file with `ports` ports.
pub fn parse(text: &str, ports: usize) -> Result<TouchstoneData, TouchstoneError> {
    if !(1..=2).contains(&ports) {
        return Err(TouchstoneError::UnsupportedPorts(ports));
    }
    let expected = 1 + 2 * ports * ports;
    let mut options: Option<Options> = None;
    let mut frequencies = Vec::new();
    let mut samples = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(body) = content.strip_prefix('#') {
            // Only the first option line counts.
            if options.is_none() {
                options = Some(parse_options(body, line)?);
            }
            continue;
        }
        let opts = options.get_or_insert_with(|| Options {
            unit: FrequencyUnit::default(),
            format: DataFormat::default(),
            resistance: 50.0,
        });
        let values = content
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| TouchstoneError::InvalidNumber { line, token: t.into() }))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != expected {
            return Err(TouchstoneError::WrongPortCount { line, ports, expected, found: values.len() });
        }
        let f = values[0] * opts.unit.scale();
        if !(f >= 0.0 && f.is_finite()) || frequencies.last().is_some_and(|&p| f <= p) {
            return Err(TouchstoneError::NonMonotone { line, frequency_hz: f });
        }
        let row: Vec<Complex64> = values[1..].chunks(2).map(|p| opts.format.decode(p[0], p[1])).collect();
        frequencies.push(f);
        samples.push(file_order(ports, &row));
    }
    if frequencies.is_empty() {
        return Err(TouchstoneError::Empty);
    }
    let opts = options.unwrap_or(Options { unit: FrequencyUnit::default(), format: DataFormat::default(), resistance: 50.0 });
    Ok(TouchstoneData {
        ports,
        resistance: opts.resistance,
        unit: opts.unit,
        format: opts.format,
        frequencies,
        samples,
    })
}

/// Reads a file, taking the port count from its `.sNp` extension.
pub fn read(path: &Path) -> Result<TouchstoneData, TouchstoneError> {
    let ports = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .and_then(|e| e.strip_prefix('s')?.strip_suffix('p')?.parse::<usize>().ok())
        .ok_or_else(|| TouchstoneError::Io {
            path: path.display().to_string(),
            message: "extension must be .s1p or .s2p".into(),
        })?;
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse(&text, ports)
}

impl fmt::Display for FrequencyUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrequencyUnit::Hz => "Hz",
            FrequencyUnit::KHz => "kHz",
            FrequencyUnit::MHz => "MHz",
            FrequencyUnit::GHz => "GHz",
        })
    }
}

impl FromStr for TouchstoneData {
    type Err = TouchstoneError;

    /// Parses a one-port file.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s, 1)
    }
}
