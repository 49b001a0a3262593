//! CAN 2.0A frame model, frame timing, and the two supported log formats:
//! OTIDS-style text captures (read) and the canonical frames CSV
//! (read/write, bit-exact).

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use thiserror::Error;

/// Highest valid 11-bit base identifier.
pub const MAX_ID: u16 = 0x7FF;

/// Canonical frames CSV header.
pub const CSV_HEADER: &str = "timestamp_s,id_hex,dlc,payload_hex,label";

#[derive(Debug, Error)]
pub enum CanError {
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("invalid timing: {0}")]
    InvalidTiming(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Provenance of a frame: synthesized benign traffic or an injected
/// identifier-zero flood frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameLabel {
    Benign,
    DosInjected,
}

impl FrameLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            FrameLabel::Benign => "benign",
            FrameLabel::DosInjected => "dos",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "benign" => Some(FrameLabel::Benign),
            "dos" => Some(FrameLabel::DosInjected),
            _ => None,
        }
    }
}

/// One CAN 2.0A base frame. `payload()` is always exactly `dlc` bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct CanFrame {
    timestamp: f64,
    id: u16,
    dlc: u8,
    payload: [u8; 8],
    label: FrameLabel,
}

impl CanFrame {
    pub fn new(timestamp: f64, id: u16, payload: &[u8], label: FrameLabel) -> Result<Self, CanError> {
        if !(timestamp >= 0.0) {
            return Err(CanError::InvalidFrame(format!("timestamp {timestamp} < 0")));
        }
        if id > MAX_ID {
            return Err(CanError::InvalidFrame(format!("id {id:#X} exceeds 11 bits")));
        }
        if payload.len() > 8 {
            return Err(CanError::InvalidFrame(format!(
                "payload length {} exceeds 8",
                payload.len()
            )));
        }
        let mut bytes = [0u8; 8];
        bytes[..payload.len()].copy_from_slice(payload);
        Ok(Self {
            timestamp,
            id,
            dlc: payload.len() as u8,
            payload: bytes,
            label,
        })
    }

    pub fn timestamp(&self) -> f64 {
        self.timestamp
    }

    pub fn id(&self) -> u16 {
        self.id
    }

    pub fn dlc(&self) -> u8 {
        self.dlc
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload[..self.dlc as usize]
    }

    pub fn label(&self) -> FrameLabel {
        self.label
    }

    /// Copy with a shifted timestamp; used when re-stamping schedules.
    pub fn at(&self, timestamp: f64) -> Self {
        let mut f = self.clone();
        f.timestamp = timestamp;
        f
    }
}

/// Bit-level timing of the base frame format. 47 overhead bits plus 8 per
/// payload byte; stuff bits excluded by default so transmission times stay
/// payload-independent. The worst-case stuffing mode adds
/// `floor((34 + 8*dlc - 1) / 4)` bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameTiming {
    pub bitrate: u32,
    pub worst_case_stuffing: bool,
}

impl Default for FrameTiming {
    fn default() -> Self {
        Self {
            bitrate: 500_000,
            worst_case_stuffing: false,
        }
    }
}

impl FrameTiming {
    pub fn new(bitrate: u32) -> Result<Self, CanError> {
        if bitrate == 0 {
            return Err(CanError::InvalidTiming("bitrate must be positive".into()));
        }
        Ok(Self {
            bitrate,
            worst_case_stuffing: false,
        })
    }

    pub fn frame_bits(&self, dlc: u8) -> u32 {
        let base = 47 + 8 * u32::from(dlc);
        if self.worst_case_stuffing {
            base + (34 + 8 * u32::from(dlc) - 1) / 4
        } else {
            base
        }
    }

    /// Transmission time of a frame with the given DLC, in seconds.
    pub fn tx_seconds(&self, dlc: u8) -> f64 {
        f64::from(self.frame_bits(dlc)) / f64::from(self.bitrate)
    }

    pub fn frame_tx_time(&self, frame: &CanFrame) -> f64 {
        self.tx_seconds(frame.dlc())
    }
}

/// Per-line parse diagnostic emitted by lenient parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

/// Parses one OTIDS-style record:
/// `Timestamp: <float> ID: <hex> <flags...> DLC: <int> <dlc hex bytes>`.
///
/// Returns `Ok(None)` for blank and `#`-comment lines. Frames with
/// identifier zero are labeled as injected flood traffic, everything else as
/// benign, matching the DoS semantics of the source captures.
pub fn parse_otids_line(line: &str) -> Result<Option<CanFrame>, String> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let tokens: Vec<&str> = trimmed.split_whitespace().collect();
    if tokens.len() < 2 || tokens[0] != "Timestamp:" {
        return Err("missing `Timestamp:` field".into());
    }
    let timestamp: f64 = tokens[1]
        .parse()
        .map_err(|_| format!("bad timestamp `{}`", tokens[1]))?;
    if tokens.len() < 4 || tokens[2] != "ID:" {
        return Err("missing `ID:` field".into());
    }
    let id = u16::from_str_radix(tokens[3], 16).map_err(|_| format!("bad id `{}`", tokens[3]))?;
    if id > MAX_ID {
        return Err(format!("id {:04x} exceeds 11 bits", id));
    }
    // Skip flag tokens between the identifier and the DLC field.
    let dlc_key = tokens[4..]
        .iter()
        .position(|t| *t == "DLC:")
        .map(|p| p + 4)
        .ok_or_else(|| "missing `DLC:` field".to_string())?;
    let dlc: usize = tokens
        .get(dlc_key + 1)
        .ok_or_else(|| "missing DLC value".to_string())?
        .parse()
        .map_err(|_| format!("bad DLC `{}`", tokens[dlc_key + 1]))?;
    if dlc > 8 {
        return Err(format!("DLC {dlc} exceeds 8"));
    }
    let data_tokens = &tokens[dlc_key + 2..];
    if data_tokens.len() != dlc {
        return Err(format!(
            "expected {dlc} payload bytes, found {}",
            data_tokens.len()
        ));
    }
    let mut payload = Vec::with_capacity(dlc);
    for tok in data_tokens {
        payload.push(u8::from_str_radix(tok, 16).map_err(|_| format!("bad payload byte `{tok}`"))?);
    }
    let label = if id == 0 {
        FrameLabel::DosInjected
    } else {
        FrameLabel::Benign
    };
    CanFrame::new(timestamp, id, &payload, label)
        .map(Some)
        .map_err(|e| e.to_string())
}

fn push_checked(
    frames: &mut Vec<CanFrame>,
    diagnostics: &mut Vec<Diagnostic>,
    frame: CanFrame,
    line: usize,
    strict: bool,
) -> Result<(), CanError> {
    if let Some(last) = frames.last() {
        if frame.timestamp() < last.timestamp() {
            let reason = format!(
                "timestamp {} goes backwards (previous {})",
                frame.timestamp(),
                last.timestamp()
            );
            if strict {
                return Err(CanError::MalformedRecord { line, reason });
            }
            diagnostics.push(Diagnostic { line, message: reason });
            return Ok(());
        }
    }
    frames.push(frame);
    Ok(())
}

/// Parses an OTIDS-style text log. Lenient mode skips malformed records and
/// reports them; strict mode fails on the first one.
pub fn parse_otids<R: BufRead>(
    reader: R,
    strict: bool,
) -> Result<(Vec<CanFrame>, Vec<Diagnostic>), CanError> {
    let mut frames = Vec::new();
    let mut diagnostics = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        match parse_otids_line(&line) {
            Ok(Some(frame)) => push_checked(&mut frames, &mut diagnostics, frame, lineno, strict)?,
            Ok(None) => {}
            Err(reason) => {
                if strict {
                    return Err(CanError::MalformedRecord { line: lineno, reason });
                }
                diagnostics.push(Diagnostic {
                    line: lineno,
                    message: reason,
                });
            }
        }
    }
    Ok((frames, diagnostics))
}

fn parse_csv_record(line: &str) -> Result<CanFrame, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 5 {
        return Err(format!("expected 5 fields, found {}", fields.len()));
    }
    let timestamp: f64 = fields[0]
        .parse()
        .map_err(|_| format!("bad timestamp `{}`", fields[0]))?;
    let id = u16::from_str_radix(fields[1], 16).map_err(|_| format!("bad id `{}`", fields[1]))?;
    let dlc: usize = fields[2].parse().map_err(|_| format!("bad dlc `{}`", fields[2]))?;
    if dlc > 8 {
        return Err(format!("dlc {dlc} exceeds 8"));
    }
    let hex = fields[3];
    if hex.len() != 2 * dlc {
        return Err(format!(
            "payload_hex has {} digits, expected {}",
            hex.len(),
            2 * dlc
        ));
    }
    let mut payload = Vec::with_capacity(dlc);
    for i in 0..dlc {
        let byte = u8::from_str_radix(&hex[2 * i..2 * i + 2], 16)
            .map_err(|_| format!("bad payload_hex `{hex}`"))?;
        payload.push(byte);
    }
    let label = FrameLabel::parse(fields[4]).ok_or_else(|| format!("bad label `{}`", fields[4]))?;
    CanFrame::new(timestamp, id, &payload, label).map_err(|e| e.to_string())
}

/// Parses the canonical frames CSV.
pub fn parse_csv<R: BufRead>(
    reader: R,
    strict: bool,
) -> Result<(Vec<CanFrame>, Vec<Diagnostic>), CanError> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(h) => h?,
        None => {
            return Err(CanError::HeaderMismatch {
                expected: CSV_HEADER.into(),
                found: "<empty file>".into(),
            })
        }
    };
    if header.trim_end() != CSV_HEADER {
        return Err(CanError::HeaderMismatch {
            expected: CSV_HEADER.into(),
            found: header,
        });
    }
    let mut frames = Vec::new();
    let mut diagnostics = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let lineno = idx + 2; // 1-based, after the header
        if line.trim().is_empty() {
            continue;
        }
        match parse_csv_record(&line) {
            Ok(frame) => push_checked(&mut frames, &mut diagnostics, frame, lineno, strict)?,
            Err(reason) => {
                if strict {
                    return Err(CanError::MalformedRecord { line: lineno, reason });
                }
                diagnostics.push(Diagnostic {
                    line: lineno,
                    message: reason,
                });
            }
        }
    }
    Ok((frames, diagnostics))
}

/// Formats one frame as a canonical CSV record (no trailing newline).
pub fn csv_record(frame: &CanFrame) -> String {
    let mut hex = String::with_capacity(16);
    for b in frame.payload() {
        let _ = write!(hex, "{b:02X}");
    }
    format!(
        "{:.6},{:03X},{},{},{}",
        frame.timestamp(),
        frame.id(),
        frame.dlc(),
        hex,
        frame.label().as_str()
    )
}

/// Writes the canonical frames CSV; returns the record count. Timestamps are
/// fixed at six fractional digits and hex fields are uppercase, so equal
/// frame sequences always produce identical bytes.
pub fn write_csv<W: Write>(frames: &[CanFrame], mut sink: W) -> Result<usize, CanError> {
    writeln!(sink, "{CSV_HEADER}")?;
    for frame in frames {
        writeln!(sink, "{}", csv_record(frame))?;
    }
    Ok(frames.len())
}
