//! Text form of instance descriptors, e.g. `F:k=3,q=5,sigma=101`,
//! `J:k=2,sigma=1-2`, `Fprime:k=3,q=3,sigma=101`, `R1:n=32,p=0.33,seed=7`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::random::DEFAULT_ANTIPARALLEL_PROB;

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceDescriptor {
    /// Paths entered from `s` where `σ(i) = 1`.
    F {
        k: usize,
        q: usize,
        sigma: Vec<bool>,
    },
    /// Paths of length `σ(i) + k`, all entered from `s`.
    J {
        k: usize,
        sigma: Vec<usize>,
    },
    /// `F` without `s`, entered from `u` instead.
    FPrime {
        k: usize,
        q: usize,
        sigma: Vec<bool>,
    },
    RandomDiam1 {
        n: usize,
        p: f64,
        seed: u64,
    },
}

/// Syntax error at a byte offset of the descriptor string.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("descriptor parse error at position {position}: {message}")]
pub struct DescriptorError {
    pub position: usize,
    pub message: String,
}

fn err(position: usize, message: impl Into<String>) -> DescriptorError {
    DescriptorError { position, message: message.into() }
}

fn fmt_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for InstanceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::F { k, q, sigma } => write!(f, "F:k={k},q={q},sigma={}", fmt_bits(sigma)),
            Self::FPrime { k, q, sigma } => write!(f, "Fprime:k={k},q={q},sigma={}", fmt_bits(sigma)),
            Self::J { k, sigma } => {
                let parts: Vec<String> = sigma.iter().map(usize::to_string).collect();
                write!(f, "J:k={k},sigma={}", parts.join("-"))
            }
            Self::RandomDiam1 { n, p, seed } => write!(f, "R1:n={n},p={p},seed={seed}"),
        }
    }
}

/// One `key=value` field with the offset of its value.
struct Field<'a> {
    key: &'a str,
    key_at: usize,
    value: &'a str,
    value_at: usize,
}

fn split_fields(body: &str, offset: usize) -> Result<Vec<Field<'_>>, DescriptorError> {
    let mut fields = Vec::new();
    let mut at = offset;
    for part in body.split(',') {
        let eq = part.find('=').ok_or_else(|| err(at, format!("expected key=value, got {part:?}")))?;
        let (key, value) = (&part[..eq], &part[eq + 1..]);
        if key.is_empty() {
            return Err(err(at, "empty key"));
        }
        if fields.iter().any(|f: &Field<'_>| f.key == key) {
            return Err(err(at, format!("duplicate key {key:?}")));
        }
        fields.push(Field { key, key_at: at, value, value_at: at + eq + 1 });
        at += part.len() + 1;
    }
    Ok(fields)
}

struct Fields<'a> {
    fields: Vec<Field<'a>>,
    end: usize,
}

impl<'a> Fields<'a> {
    fn take(&mut self, key: &str) -> Option<Field<'a>> {
        let idx = self.fields.iter().position(|f| f.key == key)?;
        Some(self.fields.remove(idx))
    }

    fn number<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, DescriptorError> {
        match self.take(key) {
            None => Ok(None),
            Some(f) => {
                f.value.parse().map(Some).map_err(|_| err(f.value_at, format!("invalid value {:?} for {key}", f.value)))
            }
        }
    }

    fn required<T: FromStr>(&mut self, key: &str) -> Result<T, DescriptorError> {
        let end = self.end;
        self.number(key)?.ok_or_else(|| err(end, format!("missing required key {key:?}")))
    }

    fn bits(&mut self) -> Result<Option<Vec<bool>>, DescriptorError> {
        let Some(f) = self.take("sigma") else { return Ok(None) };
        f.value
            .char_indices()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(err(f.value_at + i, format!("sigma must be a bit string, found {other:?}"))),
            })
            .collect::<Result<_, _>>()
            .map(Some)
    }

    fn sequence(&mut self) -> Result<Option<Vec<usize>>, DescriptorError> {
        let Some(f) = self.take("sigma") else { return Ok(None) };
        let mut at = f.value_at;
        let mut out = Vec::new();
        for part in f.value.split('-') {
            out.push(part.parse().map_err(|_| err(at, format!("invalid sigma entry {part:?}")))?);
            at += part.len() + 1;
        }
        Ok(Some(out))
    }

    fn finish(self) -> Result<(), DescriptorError> {
        match self.fields.first() {
            Some(f) => Err(err(f.key_at, format!("unknown key {:?}", f.key))),
            None => Ok(()),
        }
    }
}

impl FromStr for InstanceDescriptor {
    type Err = DescriptorError;

    /// `sigma` may be omitted: all ones for `F`/`Fprime`, all `k` for `J`.
    /// For `R1`, `p` defaults to 1/3 and `seed` to 0.
    fn from_str(s: &str) -> Result<Self, DescriptorError> {
        let colon = s.find(':').ok_or_else(|| err(0, "expected FAMILY:key=value,..."))?;
        let (family, body) = (&s[..colon], &s[colon + 1..]);
        let mut fields = Fields { fields: split_fields(body, colon + 1)?, end: s.len() };
        let desc = match family {
            "F" | "Fprime" => {
                let k = fields.required("k")?;
                let q = fields.required("q")?;
                let sigma = fields.bits()?.unwrap_or_else(|| vec![true; k]);
                if family == "F" {
                    Self::F { k, q, sigma }
                } else {
                    Self::FPrime { k, q, sigma }
                }
            }
            "J" => {
                let k = fields.required("k")?;
                let sigma = fields.sequence()?.unwrap_or_else(|| vec![k; k]);
                Self::J { k, sigma }
            }
            "R1" => Self::RandomDiam1 {
                n: fields.required("n")?,
                p: fields.number("p")?.unwrap_or(DEFAULT_ANTIPARALLEL_PROB),
                seed: fields.number("seed")?.unwrap_or(0),
            },
            other => return Err(err(0, format!("unknown family {other:?} (expected F, J, Fprime or R1)"))),
        };
        fields.finish()?;
        Ok(desc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        assert_eq!(
            "F:k=3,q=5,sigma=101".parse(),
            Ok(InstanceDescriptor::F { k: 3, q: 5, sigma: vec![true, false, true] })
        );
        assert_eq!("J:k=2,sigma=1-2".parse(), Ok(InstanceDescriptor::J { k: 2, sigma: vec![1, 2] }));
        assert_eq!(
            "Fprime:k=3,q=3,sigma=101".parse(),
            Ok(InstanceDescriptor::FPrime { k: 3, q: 3, sigma: vec![true, false, true] })
        );
        assert_eq!("R1:n=32,p=0.33,seed=7".parse(), Ok(InstanceDescriptor::RandomDiam1 { n: 32, p: 0.33, seed: 7 }));
    }

    #[test]
    fn defaults() {
        assert_eq!("J:k=4".parse(), Ok(InstanceDescriptor::J { k: 4, sigma: vec![4; 4] }));
        assert_eq!("F:q=2,k=2".parse(), Ok(InstanceDescriptor::F { k: 2, q: 2, sigma: vec![true; 2] }));
        assert_eq!(
            "R1:n=8".parse(),
            Ok(InstanceDescriptor::RandomDiam1 { n: 8, p: DEFAULT_ANTIPARALLEL_PROB, seed: 0 })
        );
    }

    #[test]
    fn display_round_trips() {
        for text in ["F:k=3,q=5,sigma=101", "J:k=2,sigma=1-2", "Fprime:k=3,q=3,sigma=101", "R1:n=32,p=0.33,seed=7"] {
            let desc: InstanceDescriptor = text.parse().unwrap();
            assert_eq!(desc.to_string(), text);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = "F:k=3,q=5,sigma=1x1".parse::<InstanceDescriptor>().unwrap_err();
        assert_eq!(e.position, 17);
        let e = "F:k=3,q=zz".parse::<InstanceDescriptor>().unwrap_err();
        assert_eq!(e.position, 8);
        let e = "F:k=3".parse::<InstanceDescriptor>().unwrap_err();
        assert_eq!((e.position, e.message.as_str()), (5, "missing required key \"q\""));
        let e = "J:k=2,sigma=1-x".parse::<InstanceDescriptor>().unwrap_err();
        assert_eq!(e.position, 14);
        let e = "R1:n=3,colour=red".parse::<InstanceDescriptor>().unwrap_err();
        assert_eq!(e.position, 7);
        assert_eq!("Q:k=1".parse::<InstanceDescriptor>().unwrap_err().position, 0);
        assert!("F".parse::<InstanceDescriptor>().is_err());
        assert!("F:k=1,k=2,q=1".parse::<InstanceDescriptor>().is_err());
    }
}
