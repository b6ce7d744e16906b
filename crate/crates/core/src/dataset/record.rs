//! Sample metadata parsed from BreakHis-style file names:
//! `SOB_<B|M>_<SUBTYPE>-<patient>-<magnification>-<sequence>.png`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    Benign,
    Malignant,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 2] = [ClassLabel::Benign, ClassLabel::Malignant];

    pub fn code(self) -> &'static str {
        match self {
            ClassLabel::Benign => "B",
            ClassLabel::Malignant => "M",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Benign => "benign",
            ClassLabel::Malignant => "malignant",
        }
    }

    pub fn other(self) -> Self {
        match self {
            ClassLabel::Benign => ClassLabel::Malignant,
            ClassLabel::Malignant => ClassLabel::Benign,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Tumor subtype. The first four are benign, the rest malignant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Subtype {
    A,
    F,
    TA,
    PT,
    DC,
    PC,
    MC,
    LC,
}

impl Subtype {
    pub const ALL: [Subtype; 8] = [
        Subtype::A,
        Subtype::F,
        Subtype::TA,
        Subtype::PT,
        Subtype::DC,
        Subtype::PC,
        Subtype::MC,
        Subtype::LC,
    ];

    pub fn class_label(self) -> ClassLabel {
        match self {
            Subtype::A | Subtype::F | Subtype::TA | Subtype::PT => ClassLabel::Benign,
            Subtype::DC | Subtype::PC | Subtype::MC | Subtype::LC => ClassLabel::Malignant,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Subtype::A => "A",
            Subtype::F => "F",
            Subtype::TA => "TA",
            Subtype::PT => "PT",
            Subtype::DC => "DC",
            Subtype::PC => "PC",
            Subtype::MC => "MC",
            Subtype::LC => "LC",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Subtype::A => "Adenosis",
            Subtype::F => "Fibroadenoma",
            Subtype::TA => "Tubular adenoma",
            Subtype::PT => "Phyllodes tumor",
            Subtype::DC => "Ductal carcinoma",
            Subtype::PC => "Papillary carcinoma",
            Subtype::MC => "Mucinous carcinoma",
            Subtype::LC => "Lobular carcinoma",
        }
    }
}

impl fmt::Display for Subtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Subtype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Subtype::ALL
            .into_iter()
            .find(|t| t.code() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown subtype {s:?}")))
    }
}

/// Optical magnification; one of 40, 100, 200, 400.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub struct Magnification(u16);

impl Magnification {
    pub const ALL: [Magnification; 4] = [
        Magnification(40),
        Magnification(100),
        Magnification(200),
        Magnification(400),
    ];

    pub fn new(v: u16) -> Option<Self> {
        matches!(v, 40 | 100 | 200 | 400).then_some(Self(v))
    }

    pub fn value(self) -> u16 {
        self.0
    }
}

impl TryFrom<u16> for Magnification {
    type Error = String;

    fn try_from(v: u16) -> Result<Self, String> {
        Self::new(v).ok_or_else(|| format!("unsupported magnification {v}"))
    }
}

impl From<Magnification> for u16 {
    fn from(m: Magnification) -> u16 {
        m.0
    }
}

impl fmt::Display for Magnification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}X", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleRecord {
    pub path: PathBuf,
    pub class_label: ClassLabel,
    pub subtype: Subtype,
    pub patient_id: String,
    pub magnification: Magnification,
    pub sequence: u32,
}

fn grammar() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^SOB_([A-Z])_([A-Z]+)-(\d{2}-\d+[A-Za-z]*)-(\d+)-(\d+)\.png$")
            .expect("valid filename grammar")
    })
}

impl SampleRecord {
    /// Parses the file name of `path`. The error is a human-readable reason.
    pub fn from_path(path: &Path) -> Result<Self, String> {
        let name = path
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| "file name is not valid UTF-8".to_string())?;
        let caps = grammar().captures(name).ok_or_else(|| {
            "does not match SOB_<B|M>_<SUBTYPE>-<patient>-<mag>-<seq>.png".to_string()
        })?;

        let class_label = match &caps[1] {
            "B" => ClassLabel::Benign,
            "M" => ClassLabel::Malignant,
            other => return Err(format!("unknown class code {other:?}")),
        };
        let subtype: Subtype = caps[2]
            .parse()
            .map_err(|_| format!("unknown subtype {:?}", &caps[2]))?;
        if subtype.class_label() != class_label {
            return Err(format!(
                "subtype {subtype} is {} but the class code says {class_label}",
                subtype.class_label()
            ));
        }
        let magnification = caps[4]
            .parse::<u16>()
            .ok()
            .and_then(Magnification::new)
            .ok_or_else(|| format!("unsupported magnification {:?}", &caps[4]))?;
        let sequence = caps[5]
            .parse::<u32>()
            .map_err(|_| format!("sequence {:?} out of range", &caps[5]))?;

        Ok(Self {
            path: path.to_path_buf(),
            class_label,
            subtype,
            patient_id: caps[3].to_string(),
            magnification,
            sequence,
        })
    }

    /// Canonical BreakHis-style file name for these fields.
    pub fn file_name(&self) -> String {
        format!(
            "SOB_{}_{}-{}-{}-{:03}.png",
            self.class_label.code(),
            self.subtype.code(),
            self.patient_id,
            self.magnification.value(),
            self.sequence
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_benign_name() {
        let r = SampleRecord::from_path(Path::new("x/SOB_B_TA-14-21978AB-100-009.png")).unwrap();
        assert_eq!(r.class_label, ClassLabel::Benign);
        assert_eq!(r.subtype, Subtype::TA);
        assert_eq!(r.patient_id, "14-21978AB");
        assert_eq!(r.magnification.value(), 100);
        assert_eq!(r.sequence, 9);
        assert_eq!(r.file_name(), "SOB_B_TA-14-21978AB-100-009.png");
    }

    #[test]
    fn parses_malignant_name() {
        let r = SampleRecord::from_path(Path::new("SOB_M_DC-14-10926-400-012.png")).unwrap();
        assert_eq!(r.class_label, ClassLabel::Malignant);
        assert_eq!(r.subtype, Subtype::DC);
        assert_eq!(r.patient_id, "14-10926");
        assert_eq!(r.magnification.value(), 400);
        assert_eq!(r.sequence, 12);
    }

    #[test]
    fn rejects_bad_names() {
        for bad in [
            "SOB_B_DC-14-10926-400-012.png",
            "SOB_M_XX-14-10926-400-012.png",
            "SOB_B_A-14-10926-300-012.png",
            "SOB_X_A-14-10926-40-012.png",
            "SOB_B_A-14-10926-40-012.jpg",
            "SOB_B_A-1410926-40-012.png",
            "notes.txt",
        ] {
            assert!(SampleRecord::from_path(Path::new(bad)).is_err(), "{bad}");
        }
    }

    #[test]
    fn subtype_classes() {
        let benign: Vec<_> = Subtype::ALL
            .iter()
            .filter(|t| t.class_label() == ClassLabel::Benign)
            .map(|t| t.code())
            .collect();
        assert_eq!(benign, ["A", "F", "TA", "PT"]);
    }

    #[test]
    fn magnification_set() {
        assert!(Magnification::new(40).is_some());
        assert!(Magnification::new(50).is_none());
        let m: Magnification = serde_json::from_str("200").unwrap();
        assert_eq!(m.value(), 200);
        assert!(serde_json::from_str::<Magnification>("250").is_err());
    }
}
