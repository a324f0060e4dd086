use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use super::DatasetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PersonId(pub u32);

impl fmt::Display for PersonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sensor {
    Vis,
    Nir,
    Th,
}

impl Sensor {
    pub const ALL: [Sensor; 3] = [Sensor::Vis, Sensor::Nir, Sensor::Th];

    pub fn letter(self) -> char {
        match self {
            Sensor::Vis => 'C',
            Sensor::Nir => 'I',
            Sensor::Th => 'T',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'C' => Some(Sensor::Vis),
            'I' => Some(Sensor::Nir),
            'T' => Some(Sensor::Th),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sensor::Vis => "VIS",
            Sensor::Nir => "NIR",
            Sensor::Th => "TH",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Sensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sensor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "VIS" | "C" => Ok(Sensor::Vis),
            "NIR" | "I" => Ok(Sensor::Nir),
            "TH" | "T" => Ok(Sensor::Th),
            other => Err(format!("unknown sensor {other:?} (expected VIS, NIR or TH)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Illumination {
    /// Natural light.
    Na,
    /// Infrared illuminator only.
    Ir,
    /// Artificial light.
    Ar,
}

impl Illumination {
    pub const ALL: [Illumination; 3] = [Illumination::Na, Illumination::Ir, Illumination::Ar];

    pub fn code(self) -> &'static str {
        match self {
            Illumination::Na => "NA",
            Illumination::Ir => "IR",
            Illumination::Ar => "AR",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        match s {
            "NA" => Some(Illumination::Na),
            "IR" => Some(Illumination::Ir),
            "AR" => Some(Illumination::Ar),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Illumination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Illumination {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Illumination::from_code(&s.trim().to_ascii_uppercase())
            .ok_or_else(|| format!("unknown illumination {s:?} (expected NA, IR or AR)"))
    }
}

/// Identity of one capture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SampleKey {
    person: PersonId,
    session: u8,
    sensor: Sensor,
    illumination: Illumination,
    sample: u8,
}

const STRICT_PERSONS: u32 = 41;
const STRICT_SESSIONS: u32 = 4;
const STRICT_SAMPLES: u32 = 5;

fn check_range(field: &'static str, value: u32, max: u32) -> Result<(), DatasetError> {
    if value == 0 || value > max {
        return Err(DatasetError::OutOfRange { field, value });
    }
    Ok(())
}

impl SampleKey {
    /// Validates against the relaxed ranges (person 1-99, session and sample 1-9).
    pub fn new(
        person: u32,
        session: u8,
        sensor: Sensor,
        illumination: Illumination,
        sample: u8,
    ) -> Result<Self, DatasetError> {
        check_range("person", person, 99)?;
        check_range("session", session.into(), 9)?;
        check_range("sample", sample.into(), 9)?;
        Ok(SampleKey { person: PersonId(person), session, sensor, illumination, sample })
    }

    /// True when the key lies inside the 41 x 4 x 5 database grid.
    pub fn is_strict(&self) -> bool {
        self.person.0 <= STRICT_PERSONS
            && u32::from(self.session) <= STRICT_SESSIONS
            && u32::from(self.sample) <= STRICT_SAMPLES
    }

    pub fn person(&self) -> PersonId {
        self.person
    }

    pub fn session(&self) -> u8 {
        self.session
    }

    pub fn sensor(&self) -> Sensor {
        self.sensor
    }

    pub fn illumination(&self) -> Illumination {
        self.illumination
    }

    pub fn sample(&self) -> u8 {
        self.sample
    }

    pub fn code(&self) -> String {
        format_sample_code(self)
    }

    fn sort_key(&self) -> (u32, u8, char, &'static str, u8) {
        (self.person.0, self.session, self.sensor.letter(), self.illumination.code(), self.sample)
    }
}

/// Keys order exactly as their codes sort as strings.
impl Ord for SampleKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for SampleKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SampleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:02}S{}{}{}{}",
            self.person.0,
            self.session,
            self.sensor.letter(),
            self.illumination.code(),
            self.sample
        )
    }
}

fn digit(b: u8) -> Option<u32> {
    b.is_ascii_digit().then(|| u32::from(b - b'0'))
}

/// Parses an 8-character code. `strict` enforces the database ranges
/// (person 01-41, session 1-4, sample 1-5).
pub fn parse_sample_code(code: &str, strict: bool) -> Result<SampleKey, DatasetError> {
    let malformed = || DatasetError::MalformedCode(code.to_string());
    let b = code.as_bytes();
    if b.len() != 8 || !code.is_ascii() {
        return Err(malformed());
    }
    let person = digit(b[0]).zip(digit(b[1])).map(|(t, u)| t * 10 + u).ok_or_else(malformed)?;
    if b[2] != b'S' {
        return Err(malformed());
    }
    let session = digit(b[3]).ok_or_else(malformed)?;
    let sensor = Sensor::from_letter(b[4] as char).ok_or_else(malformed)?;
    let illumination = Illumination::from_code(&code[5..7]).ok_or_else(malformed)?;
    let sample = digit(b[7]).ok_or_else(malformed)?;

    let (pmax, smax, nmax) = if strict { (STRICT_PERSONS, STRICT_SESSIONS, STRICT_SAMPLES) } else { (99, 9, 9) };
    check_range("person", person, pmax)?;
    check_range("session", session, smax)?;
    check_range("sample", sample, nmax)?;
    Ok(SampleKey { person: PersonId(person), session: session as u8, sensor, illumination, sample: sample as u8 })
}

pub fn format_sample_code(key: &SampleKey) -> String {
    key.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_extremes() {
        let k = parse_sample_code("01S1CNA1", true).unwrap();
        assert_eq!(
            (k.person(), k.session(), k.sensor(), k.illumination(), k.sample()),
            (PersonId(1), 1, Sensor::Vis, Illumination::Na, 1)
        );
        let k = parse_sample_code("41S4TAR5", true).unwrap();
        assert_eq!(
            (k.person(), k.session(), k.sensor(), k.illumination(), k.sample()),
            (PersonId(41), 4, Sensor::Th, Illumination::Ar, 5)
        );
    }

    #[test]
    fn formats() {
        let k = SampleKey::new(7, 2, Sensor::Nir, Illumination::Ir, 3).unwrap();
        assert_eq!(format_sample_code(&k), "07S2IIR3");
        let k = SampleKey::new(1, 1, Sensor::Vis, Illumination::Na, 1).unwrap();
        assert_eq!(k.code(), "01S1CNA1");
    }

    #[test]
    fn range_errors() {
        assert_eq!(parse_sample_code("00S1CNA1", true), Err(DatasetError::OutOfRange { field: "person", value: 0 }));
        assert_eq!(parse_sample_code("42S1CNA1", true), Err(DatasetError::OutOfRange { field: "person", value: 42 }));
        assert!(parse_sample_code("42S1CNA1", false).is_ok());
        assert!(parse_sample_code("00S1CNA1", false).is_err());
        assert!(parse_sample_code("01S5CNA1", true).is_err());
        assert!(parse_sample_code("01S1CNA6", true).is_err());
        assert!(parse_sample_code("01S6CNA7", false).is_ok());
    }

    #[test]
    fn malformed() {
        for bad in ["01S1CNA", "01S1CNA12", "0AS1CNA1", "01X1CNA1", "01S1XNA1", "01S1CXX1", "01S1CNAx", "01S1CNé"] {
            assert!(matches!(parse_sample_code(bad, false), Err(DatasetError::MalformedCode(_))), "{bad}");
        }
    }

    #[test]
    fn order_matches_code_order() {
        let a = parse_sample_code("01S1CAR1", true).unwrap();
        let b = parse_sample_code("01S1CNA1", true).unwrap();
        let c = parse_sample_code("01S1IAR1", true).unwrap();
        assert!(a < b && b < c);
        assert!(a.code() < b.code() && b.code() < c.code());
    }

    #[test]
    fn names_parse() {
        assert_eq!("nir".parse::<Sensor>().unwrap(), Sensor::Nir);
        assert_eq!("T".parse::<Sensor>().unwrap(), Sensor::Th);
        assert_eq!(" ar".parse::<Illumination>().unwrap(), Illumination::Ar);
        assert!("UV".parse::<Sensor>().is_err());
    }
}
