//! Relation schemas and ground tuples.
//!
//! Attributes range over one of two infinite domains: `D`, uninterpreted
//! constants written as strings, and `Q`, the rationals.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{render_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttrDomain {
    D,
    Q,
}

impl fmt::Display for AttrDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrDomain::D => write!(f, "D"),
            AttrDomain::Q => write!(f, "Q"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Attr {
    pub name: String,
    pub domain: AttrDomain,
}

/// A named relation schema: an ordered list of attributes with unique names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schema {
    name: String,
    attrs: Vec<Attr>,
}

impl Schema {
    pub fn new(name: impl Into<String>, attrs: Vec<(impl Into<String>, AttrDomain)>) -> Result<Schema> {
        let name = name.into();
        let attrs: Vec<Attr> = attrs
            .into_iter()
            .map(|(n, d)| Attr { name: n.into(), domain: d })
            .collect();
        if attrs.is_empty() {
            return Err(Error::InvalidSchema(format!("relation {name} has no attributes")));
        }
        for (i, a) in attrs.iter().enumerate() {
            if attrs[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::InvalidSchema(format!(
                    "duplicate attribute `{}` in relation {name}",
                    a.name
                )));
            }
        }
        Ok(Schema { name, attrs })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.attrs.len()
    }

    pub fn attrs(&self) -> &[Attr] {
        &self.attrs
    }

    pub fn attr_index(&self, name: &str) -> Option<usize> {
        self.attrs.iter().position(|a| a.name == name)
    }

    pub fn attr_name(&self, index: usize) -> &str {
        &self.attrs[index].name
    }

    pub fn attr_domain(&self, index: usize) -> AttrDomain {
        self.attrs[index].domain
    }

    pub(crate) fn check_same(&self, other: &Schema) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SchemaMismatch {
                expected: self.name.clone(),
                found: other.name.clone(),
            })
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "relation {} (", self.name)?;
        for (i, a) in self.attrs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", a.name, a.domain)?;
        }
        write!(f, ")")
    }
}

/// A single ground value: an uninterpreted constant or an exact rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    D(String),
    Q(Rat),
}

impl Value {
    pub fn domain(&self) -> AttrDomain {
        match self {
            Value::D(_) => AttrDomain::D,
            Value::Q(_) => AttrDomain::Q,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::D(s) => write!(f, "{s}"),
            Value::Q(q) => write!(f, "{}", render_rat(q)),
        }
    }
}

/// A schema-conformant ground tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleValue {
    values: Vec<Value>,
}

impl TupleValue {
    pub fn new(schema: &Schema, values: Vec<Value>) -> Result<TupleValue> {
        if values.len() != schema.arity() {
            return Err(Error::InvalidTuple(format!(
                "arity {} does not match schema {} (arity {})",
                values.len(),
                schema.name(),
                schema.arity()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if v.domain() != schema.attr_domain(i) {
                return Err(Error::InvalidTuple(format!(
                    "value `{v}` has domain {} but attribute `{}` expects {}",
                    v.domain(),
                    schema.attr_name(i),
                    schema.attr_domain(i)
                )));
            }
        }
        Ok(TupleValue { values })
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &Value {
        &self.values[index]
    }
}

impl fmt::Display for TupleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn schema_requires_unique_attrs() {
        assert!(Schema::new("R", vec![("a", AttrDomain::D), ("a", AttrDomain::Q)]).is_err());
        assert!(Schema::new("R", Vec::<(&str, AttrDomain)>::new()).is_err());
    }

    #[test]
    fn tuple_checks_domains() {
        let car = Schema::new("Car", vec![("make", AttrDomain::D), ("year", AttrDomain::Q)]).unwrap();
        assert!(TupleValue::new(&car, vec![Value::D("VW".into()), Value::Q(rat_int(2002))]).is_ok());
        assert!(TupleValue::new(&car, vec![Value::Q(rat_int(1)), Value::Q(rat_int(2002))]).is_err());
        assert!(TupleValue::new(&car, vec![Value::D("VW".into())]).is_err());
    }
}
