use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClothingClass {
    Shirt,
    Dress,
    Pants,
}

impl ClothingClass {
    pub const ALL: [ClothingClass; 3] = [ClothingClass::Shirt, ClothingClass::Dress, ClothingClass::Pants];

    pub fn as_str(self) -> &'static str {
        match self {
            ClothingClass::Shirt => "shirt",
            ClothingClass::Dress => "dress",
            ClothingClass::Pants => "pants",
        }
    }
}

impl fmt::Display for ClothingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClothingClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "shirt" => Ok(ClothingClass::Shirt),
            "dress" => Ok(ClothingClass::Dress),
            "pants" => Ok(ClothingClass::Pants),
            _ => Err(format!("unknown label {s:?}")),
        }
    }
}

/// Where an image came from. Selects the edge detector's sensitivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageKind {
    /// High-contrast reference artwork.
    Template,
    /// Ordinary product or phone photo.
    UserPhoto,
}

impl ImageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ImageKind::Template => "template",
            ImageKind::UserPhoto => "photo",
        }
    }
}

impl fmt::Display for ImageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ImageKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "template" => Ok(ImageKind::Template),
            "photo" | "user_photo" | "userphoto" => Ok(ImageKind::UserPhoto),
            _ => Err(format!("unknown image kind {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_agree() {
        for class in ClothingClass::ALL {
            assert_eq!(class.to_string().parse::<ClothingClass>().unwrap(), class);
        }
        for kind in [ImageKind::Template, ImageKind::UserPhoto] {
            assert_eq!(kind.to_string().parse::<ImageKind>().unwrap(), kind);
        }
        assert!("skirt".parse::<ClothingClass>().is_err());
        assert_eq!("Dress".parse::<ClothingClass>().unwrap(), ClothingClass::Dress);
    }
}
