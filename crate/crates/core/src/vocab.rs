//! Closed vocabularies shared across the crate.
//!
//! Every enumerated concept (activities, variants, query formats, ...) is
//! declared through [`vocab!`], which gives it a canonical snake_case wire
//! form, a forgiving parser (case, spaces, dashes and underscores are
//! ignored), and serde support that goes through that parser.

use std::fmt;

/// Error returned when a string is not a member of a closed vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} `{value}` (expected one of: {expected})")]
pub struct UnknownTerm {
    pub kind: &'static str,
    pub value: String,
    pub expected: String,
}

/// Lowercases and strips everything that is not ASCII alphanumeric, so
/// `Socially-Engaged`, `socially_engaged` and `SOCIALLY ENGAGED` compare equal.
pub(crate) fn normalize(raw: &str) -> String {
    raw.chars()
        .filter(char::is_ascii_alphanumeric)
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

pub(crate) fn unknown(kind: &'static str, value: &str, names: &[&str]) -> UnknownTerm {
    UnknownTerm {
        kind,
        value: value.to_string(),
        expected: names.join(", "),
    }
}

macro_rules! vocab {
    (
        $(#[$meta:meta])*
        $vis:vis enum $name:ident : $kind:literal {
            $( $(#[$vmeta:meta])* $variant:ident = $wire:literal $(| $alias:literal)* ),+ $(,)?
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        $vis enum $name {
            $( $(#[$vmeta])* $variant ),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[ $( $name::$variant ),+ ];

            /// Canonical snake_case wire name.
            pub fn as_str(self) -> &'static str {
                match self {
                    $( $name::$variant => $wire ),+
                }
            }
        }

        impl ::std::fmt::Display for $name {
            fn fmt(&self, f: &mut ::std::fmt::Formatter<'_>) -> ::std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl ::std::str::FromStr for $name {
            type Err = $crate::vocab::UnknownTerm;

            fn from_str(raw: &str) -> Result<Self, Self::Err> {
                let key = $crate::vocab::normalize(raw);
                $(
                    if key == $crate::vocab::normalize($wire)
                        || key == $crate::vocab::normalize(stringify!($variant))
                        $( || key == $crate::vocab::normalize($alias) )*
                    {
                        return Ok($name::$variant);
                    }
                )+
                Err($crate::vocab::unknown($kind, raw, &[ $( $wire ),+ ]))
            }
        }

        impl ::serde::Serialize for $name {
            fn serialize<S: ::serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl<'de> ::serde::Deserialize<'de> for $name {
            fn deserialize<D: ::serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let raw = <::std::borrow::Cow<'de, str> as ::serde::Deserialize>::deserialize(d)?;
                raw.parse().map_err(::serde::de::Error::custom)
            }
        }
    };
}

pub(crate) use vocab;

/// Joins a list of displayable items with `", "`.
pub(crate) fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {

    vocab! {
        enum Colour: "colour" {
            DarkRed = "dark_red" | "maroon",
            Blue = "blue",
        }
    }

    #[test]
    fn parsing_ignores_case_and_separators() {
        assert_eq!("Dark-Red".parse::<Colour>().unwrap(), Colour::DarkRed);
        assert_eq!("DARK RED".parse::<Colour>().unwrap(), Colour::DarkRed);
        assert_eq!("DarkRed".parse::<Colour>().unwrap(), Colour::DarkRed);
        assert_eq!("maroon".parse::<Colour>().unwrap(), Colour::DarkRed);
        let err = "green".parse::<Colour>().unwrap_err();
        assert_eq!(err.kind, "colour");
        assert!(err.to_string().contains("dark_red, blue"));
        assert_eq!(Colour::ALL, &[Colour::DarkRed, Colour::Blue]);
    }

    #[test]
    fn serde_uses_canonical_names() {
        assert_eq!(
            serde_json::to_string(&Colour::DarkRed).unwrap(),
            "\"dark_red\""
        );
        let c: Colour = serde_json::from_str("\"Blue\"").unwrap();
        assert_eq!(c, Colour::Blue);
        assert!(serde_json::from_str::<Colour>("\"teal\"").is_err());
    }
}
