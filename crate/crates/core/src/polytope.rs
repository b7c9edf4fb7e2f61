//! Symbolic descriptions of the inscribed and circumscribed polytopes and
//! their combinations, with a small textual grammar:
//!
//! ```text
//! I_DB(4)  I_CS(4)  I_CS_gen(10,3)  C_DB(4)  C_CS(4)  C_CS_gen(10,3)  C_CS_all(5)
//! Intersect(C_DB(4),C_CS(4))   Hull(I_DB(5),I_CS(5))
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::points::{cs_points, db_points, tau_general, VertexFamily};

/// The polytope families. `Intersection` may only hold circumscribed
/// members and `HullOfUnion` only inscribed ones.
#[derive(Debug, Clone, PartialEq)]
pub enum PolytopeKind {
    IDb,
    ICs,
    ICsGen(usize),
    CDb,
    CCs,
    CCsGen(usize),
    CCsAll,
    Intersection(Vec<PolytopeSpec>),
    HullOfUnion(Vec<PolytopeSpec>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeSpec {
    kind: PolytopeKind,
    n: usize,
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::DimensionTooSmall { n, min: 3 });
    }
    Ok(())
}

fn check_j(n: usize, j: usize) -> Result<()> {
    if j == 0 || 2 * j > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= j and 2j <= n, got n = {n}, j = {j}"
        )));
    }
    Ok(())
}

impl PolytopeSpec {
    pub fn new(kind: PolytopeKind, n: usize) -> Result<Self> {
        check_n(n)?;
        match &kind {
            PolytopeKind::ICsGen(j) | PolytopeKind::CCsGen(j) => check_j(n, *j)?,
            PolytopeKind::Intersection(members) | PolytopeKind::HullOfUnion(members) => {
                let want_inscribed = matches!(kind, PolytopeKind::HullOfUnion(_));
                if members.is_empty() {
                    return Err(Error::EmptyFamily);
                }
                for m in members {
                    if m.n != n {
                        return Err(Error::DimensionMismatch {
                            expected: n,
                            actual: m.n,
                        });
                    }
                    if m.is_inscribed() != want_inscribed {
                        return Err(Error::UnsupportedSpec(format!(
                            "{} cannot contain {m}",
                            if want_inscribed { "Hull" } else { "Intersect" }
                        )));
                    }
                }
            }
            _ => {}
        }
        Ok(PolytopeSpec { kind, n })
    }

    pub fn i_db(n: usize) -> Result<Self> {
        Self::new(PolytopeKind::IDb, n)
    }
    pub fn i_cs(n: usize) -> Result<Self> {
        Self::new(PolytopeKind::ICs, n)
    }
    pub fn i_cs_gen(n: usize, j: usize) -> Result<Self> {
        Self::new(PolytopeKind::ICsGen(j), n)
    }
    pub fn c_db(n: usize) -> Result<Self> {
        Self::new(PolytopeKind::CDb, n)
    }
    pub fn c_cs(n: usize) -> Result<Self> {
        Self::new(PolytopeKind::CCs, n)
    }
    pub fn c_cs_gen(n: usize, j: usize) -> Result<Self> {
        Self::new(PolytopeKind::CCsGen(j), n)
    }
    pub fn c_cs_all(n: usize) -> Result<Self> {
        Self::new(PolytopeKind::CCsAll, n)
    }

    /// Intersection of circumscribed polytopes; the dimension is taken from
    /// the first member.
    pub fn intersection(members: Vec<PolytopeSpec>) -> Result<Self> {
        let n = members.first().ok_or(Error::EmptyFamily)?.n;
        Self::new(PolytopeKind::Intersection(members), n)
    }

    /// Convex hull of the union of inscribed polytopes.
    pub fn hull_of_union(members: Vec<PolytopeSpec>) -> Result<Self> {
        let n = members.first().ok_or(Error::EmptyFamily)?.n;
        Self::new(PolytopeKind::HullOfUnion(members), n)
    }

    pub fn kind(&self) -> &PolytopeKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Convex hull of boundary points (a sufficient condition for locking).
    pub fn is_inscribed(&self) -> bool {
        matches!(
            self.kind,
            PolytopeKind::IDb | PolytopeKind::ICs | PolytopeKind::ICsGen(_) | PolytopeKind::HullOfUnion(_)
        )
    }

    pub fn is_circumscribed(&self) -> bool {
        !self.is_inscribed()
    }

    /// An upper bound on `max − min` over the polytope, used to size the
    /// sampling cube.
    pub fn spread_bound(&self) -> Result<f64> {
        let n = self.n;
        Ok(match &self.kind {
            PolytopeKind::IDb => n as f64,
            PolytopeKind::ICs | PolytopeKind::CCs | PolytopeKind::CCsAll => 2.0 * tau_general(n, 1)?.value,
            // ‖y‖∞ ≤ τ_{N,j}
            PolytopeKind::ICsGen(j) => 2.0 * tau_general(n, *j)?.value,
            // largest entry ≤ N − 1 and smallest ≥ −(N − 1)
            PolytopeKind::CDb => 2.0 * (n as f64 - 1.0),
            // top-j minus bottom-j sums dominate the spread when 2j ≤ N
            PolytopeKind::CCsGen(j) => 2.0 * *j as f64 * tau_general(n, *j)?.value,
            PolytopeKind::Intersection(ms) => {
                let mut b = f64::INFINITY;
                for m in ms {
                    b = b.min(m.spread_bound()?);
                }
                b
            }
            PolytopeKind::HullOfUnion(ms) => {
                let mut b = 0.0f64;
                for m in ms {
                    b = b.max(m.spread_bound()?);
                }
                b
            }
        })
    }

    /// Boundary point families whose hull is this polytope, in member order.
    /// Only defined for inscribed specs.
    pub fn vertex_families(&self) -> Result<Vec<VertexFamily>> {
        match &self.kind {
            PolytopeKind::IDb => Ok(vec![db_points(self.n)?]),
            PolytopeKind::ICs => Ok(vec![cs_points(self.n, 1)?]),
            PolytopeKind::ICsGen(j) => Ok(vec![cs_points(self.n, *j)?]),
            PolytopeKind::HullOfUnion(members) => {
                let mut out = Vec::new();
                for m in members {
                    out.extend(m.vertex_families()?);
                }
                Ok(out)
            }
            _ => Err(Error::UnsupportedSpec(format!(
                "{self} is not given by a vertex family"
            ))),
        }
    }
}

impl fmt::Display for PolytopeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        let list = |f: &mut fmt::Formatter<'_>, name: &str, members: &[PolytopeSpec]| {
            write!(f, "{name}(")?;
            for (i, m) in members.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{m}")?;
            }
            write!(f, ")")
        };
        match &self.kind {
            PolytopeKind::IDb => write!(f, "I_DB({n})"),
            PolytopeKind::ICs => write!(f, "I_CS({n})"),
            PolytopeKind::ICsGen(j) => write!(f, "I_CS_gen({n},{j})"),
            PolytopeKind::CDb => write!(f, "C_DB({n})"),
            PolytopeKind::CCs => write!(f, "C_CS({n})"),
            PolytopeKind::CCsGen(j) => write!(f, "C_CS_gen({n},{j})"),
            PolytopeKind::CCsAll => write!(f, "C_CS_all({n})"),
            PolytopeKind::Intersection(m) => list(f, "Intersect", m),
            PolytopeKind::HullOfUnion(m) => list(f, "Hull", m),
        }
    }
}

impl Serialize for PolytopeSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for PolytopeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.fail("trailing input"));
        }
        Ok(spec)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn fail(&self, reason: &str) -> Error {
        Error::SpecParse {
            input: self.src.to_string(),
            reason: format!("{reason} at byte {}", self.pos),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.fail(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.fail("expected a polytope name"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let value = rest[..len].parse().map_err(|_| self.fail("expected an integer"))?;
        self.pos += len;
        Ok(value)
    }

    fn spec(&mut self) -> Result<PolytopeSpec> {
        let name = self.ident()?.to_string();
        self.eat('(')?;
        let spec = match name.as_str() {
            "Intersect" | "Hull" => {
                let mut members = vec![self.spec()?];
                loop {
                    self.skip_ws();
                    if self.src[self.pos..].starts_with(',') {
                        self.pos += 1;
                        members.push(self.spec()?);
                    } else {
                        break;
                    }
                }
                if name == "Hull" {
                    PolytopeSpec::hull_of_union(members)?
                } else {
                    PolytopeSpec::intersection(members)?
                }
            }
            "I_CS_gen" | "C_CS_gen" => {
                let n = self.integer()?;
                self.eat(',')?;
                let j = self.integer()?;
                if name == "I_CS_gen" {
                    PolytopeSpec::i_cs_gen(n, j)?
                } else {
                    PolytopeSpec::c_cs_gen(n, j)?
                }
            }
            "I_DB" | "I_CS" | "C_DB" | "C_CS" | "C_CS_all" => {
                let n = self.integer()?;
                match name.as_str() {
                    "I_DB" => PolytopeSpec::i_db(n)?,
                    "I_CS" => PolytopeSpec::i_cs(n)?,
                    "C_DB" => PolytopeSpec::c_db(n)?,
                    "C_CS" => PolytopeSpec::c_cs(n)?,
                    _ => PolytopeSpec::c_cs_all(n)?,
                }
            }
            other => return Err(self.fail(&format!("unknown polytope '{other}'"))),
        };
        self.eat(')')?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in [
            "I_DB(4)",
            "I_CS(4)",
            "I_CS_gen(10,3)",
            "C_DB(4)",
            "C_CS(5)",
            "C_CS_gen(10,3)",
            "C_CS_all(7)",
            "Intersect(C_DB(4),C_CS(4))",
            "Hull(I_DB(5),I_CS(5))",
            "Intersect(C_DB(6),Intersect(C_CS(6),C_CS_gen(6,3)))",
        ] {
            let spec: PolytopeSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        let spaced: PolytopeSpec = " Intersect( C_DB(4) , C_CS( 4 ) ) ".parse().unwrap();
        assert_eq!(spaced.to_string(), "Intersect(C_DB(4),C_CS(4))");
    }

    #[test]
    fn composite_rules() {
        assert!("Intersect(I_DB(4),C_CS(4))".parse::<PolytopeSpec>().is_err());
        assert!("Hull(C_DB(4))".parse::<PolytopeSpec>().is_err());
        assert!(matches!(
            "Intersect(C_DB(4),C_CS(5))".parse::<PolytopeSpec>(),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(PolytopeSpec::intersection(vec![]).is_err());
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "",
            "I_DB",
            "I_DB(4",
            "I_DB(4))",
            "X(4)",
            "I_CS_gen(4)",
            "C_CS_gen(4,3)",
            "C_DB(2)",
            "C_DB(-1)",
        ] {
            assert!(bad.parse::<PolytopeSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn spread_bounds_hold_at_vertices() {
        use crate::norms::{norm_for, spread};
        for n in 3..=7 {
            let mut specs = vec![PolytopeSpec::i_db(n).unwrap(), PolytopeSpec::i_cs(n).unwrap()];
            for j in 1..=n / 2 {
                specs.push(PolytopeSpec::i_cs_gen(n, j).unwrap());
            }
            for spec in specs {
                let b = spec.spread_bound().unwrap();
                for f in spec.vertex_families().unwrap() {
                    for v in f.iter() {
                        assert!(spread(&v).value() <= b + 1e-12, "{spec}");
                    }
                }
            }
            // (N−1, −(N−1), 0, …) lies on the boundary of C_DB and attains the bound
            let c_db = PolytopeSpec::c_db(n).unwrap();
            let mut y = vec![0.0; n];
            y[0] = n as f64 - 1.0;
            y[1] = -(n as f64 - 1.0);
            let g = norm_for(&c_db, &y).unwrap().value();
            assert!((g - 1.0).abs() < 1e-12);
            assert!((spread(&y).value() - c_db.spread_bound().unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn families_of_inscribed_specs() {
        let hull: PolytopeSpec = "Hull(I_DB(5),I_CS(5))".parse().unwrap();
        let fams = hull.vertex_families().unwrap();
        assert_eq!(fams.len(), 2);
        assert_eq!(fams[0].count() + fams[1].count(), 30 + 20);
        assert!(PolytopeSpec::c_cs(5).unwrap().vertex_families().is_err());
    }
}
