//! Versioned TOML spec documents.
//!
//! Every table rejects unknown keys. Polynomial strings keep their source
//! span so syntax errors inside them are reported at document positions.

use std::ops::{Range, RangeInclusive};

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::gamma_tools::ZpGammaModule;
use crate::iwasawa_ring::{IntPoly, RingAutomorphism};
use crate::module_theory::{CMStructure, FreeResolution, ModulePresentation, PolyMatrix, StructurePair};
use crate::tower_sim::SemidirectModule;

pub const SCHEMA_VERSION: u32 = 1;

type PolyRows = Vec<Vec<Spanned<String>>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: Spanned<u32>,
    pub module: Option<Spanned<ModuleSpec>>,
    pub tower: Option<Spanned<TowerSpec>>,
    pub structure: Option<StructureSpec>,
    pub gamma_module: Option<Spanned<GammaSpec>>,
    pub fit: Option<FitSpec>,
    pub run: Option<RunSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub prime: Option<u64>,
    pub r: Option<usize>,
    pub precision: Option<u32>,
    pub guard: Option<u32>,
    pub constructor: Option<Spanned<String>>,
    /// `b x a` matrix of polynomial strings.
    pub presentation: Option<PolyRows>,
    /// Higher differentials `d_2, d_3, ...` continuing the presentation.
    pub resolution: Option<Vec<PolyRows>>,
    pub f: Option<Spanned<String>>,
    pub s: Option<u32>,
    pub generators: Option<Vec<Spanned<String>>>,
    pub rank: Option<usize>,
    pub a: Option<u32>,
    pub parts: Option<Vec<Spanned<ModuleSpec>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub rho: Vec<Vec<i64>>,
    pub phi: PolyRows,
    #[serde(default)]
    pub n_min: u32,
    pub n_max: u32,
    #[serde(default)]
    pub m_min: u32,
    pub m_max: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    pub m0: u32,
    pub pairs: Vec<PairSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub tau: Vec<u64>,
    pub generators: PolyRows,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSpec {
    pub prime: u64,
    #[serde(default)]
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<u32>,
    pub gamma: Vec<Vec<i64>>,
    #[serde(default)]
    pub n_min: u32,
    pub n_max: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    pub prime: u64,
    pub sequence: Vec<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub law: Option<String>,
    pub m_min: Option<u32>,
    pub m_max: Option<u32>,
}

/// `(line, column)`, both one-based, of a byte offset.
pub fn position(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}

fn error_at(text: &str, span: Range<usize>, message: impl Into<String>) -> Error {
    let (line, column) = position(text, span.start);
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses the TOML text and checks the schema version.
pub fn parse_document(text: &str) -> Result<Document> {
    let doc: Document = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| position(text, s.start));
        Error::Parse {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    if *doc.schema_version.get_ref() != SCHEMA_VERSION {
        return Err(error_at(
            text,
            doc.schema_version.span(),
            format!(
                "unsupported schema_version {}, expected {SCHEMA_VERSION}",
                doc.schema_version.get_ref()
            ),
        ));
    }
    Ok(doc)
}

/// A document after semantic validation.
#[derive(Debug)]
pub struct Spec {
    pub module: Option<ModuleInfo>,
    pub tower: Option<TowerInfo>,
    pub structure: Option<CMStructure>,
    pub gamma: Option<GammaInfo>,
    pub fit: Option<(u64, Vec<i64>)>,
    pub run: RunSpec,
}

#[derive(Debug)]
pub struct ModuleInfo {
    pub module: ModulePresentation,
    pub precision: Option<u32>,
    pub guard: Option<u32>,
}

#[derive(Debug)]
pub struct TowerInfo {
    pub tower: SemidirectModule,
    pub n_range: RangeInclusive<u32>,
    pub m_range: RangeInclusive<u32>,
}

#[derive(Debug)]
pub struct GammaInfo {
    pub prime: u64,
    pub module: ZpGammaModule,
    pub n_range: RangeInclusive<u32>,
}

struct Builder<'a> {
    text: &'a str,
}

impl Builder<'_> {
    fn poly(&self, s: &Spanned<String>, r: usize, p: u64) -> Result<IntPoly> {
        IntPoly::parse(s.get_ref(), r, p).map_err(|e| match e {
            // one byte for the opening quote
            Error::Parse { column, message, .. } => {
                let offset = s.span().start + 1 + s.get_ref().chars().take(column - 1).map(char::len_utf8).sum::<usize>();
                error_at(self.text, offset..offset, message)
            }
            other => other,
        })
    }

    fn matrix(&self, rows: &PolyRows, r: usize, p: u64) -> Result<PolyMatrix> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| self.poly(s, r, p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::from_rows(r, parsed)
    }

    fn module(&self, spec: &Spanned<ModuleSpec>, p: u64, r: usize) -> Result<ModulePresentation> {
        let span = spec.span();
        let m = spec.get_ref();
        let missing = |field: &str, what: &str| error_at(self.text, span.clone(), format!("{what} needs `{field}`"));
        let Some(kind) = &m.constructor else {
            let rows = m.presentation.as_ref().ok_or_else(|| missing("presentation", "a module without constructor"))?;
            let matrix = self.matrix(rows, r, p)?;
            let module = ModulePresentation::raw(matrix.clone(), p)?;
            return match &m.resolution {
                None => Ok(module),
                Some(higher) => {
                    let mut maps = vec![matrix];
                    for d in higher {
                        maps.push(self.matrix(d, r, p)?);
                    }
                    module.with_resolution(FreeResolution::new(maps)?)
                }
            };
        };
        match kind.get_ref().as_str() {
            "free" => ModulePresentation::free(r, m.rank.ok_or_else(|| missing("rank", "free"))?, p),
            "cyclic" => {
                let f = self.poly(m.f.as_ref().ok_or_else(|| missing("f", "cyclic"))?, r, p)?;
                ModulePresentation::cyclic(f, m.s.unwrap_or(1), p)
            }
            "p_cyclic" => ModulePresentation::p_cyclic(r, m.a.ok_or_else(|| missing("a", "p_cyclic"))?, p),
            "koszul" => {
                let gens = m
                    .generators
                    .as_ref()
                    .ok_or_else(|| missing("generators", "koszul"))?
                    .iter()
                    .map(|g| self.poly(g, r, p))
                    .collect::<Result<Vec<_>>>()?;
                ModulePresentation::koszul(r, gens, p)
            }
            "direct_sum" => {
                let parts = m.parts.as_ref().ok_or_else(|| missing("parts", "direct_sum"))?;
                for part in parts {
                    let pr = part.get_ref();
                    if pr.prime.is_some_and(|q| q != p) || pr.r.is_some_and(|q| q != r) {
                        return Err(error_at(self.text, part.span(), "summands must share prime and r"));
                    }
                }
                let built = parts.iter().map(|part| self.module(part, p, r)).collect::<Result<Vec<_>>>()?;
                ModulePresentation::direct_sum(&built)
            }
            other => Err(error_at(
                self.text,
                kind.span(),
                format!("unknown constructor '{other}' (free, cyclic, p_cyclic, koszul, direct_sum)"),
            )),
        }
    }
}

fn range(lo: u32, hi: u32, what: &str) -> Result<RangeInclusive<u32>> {
    if lo > hi {
        return Err(Error::InvalidInput(format!("{what}: empty range {lo}..={hi}")));
    }
    Ok(lo..=hi)
}

/// Parses and validates a spec document.
pub fn load_spec(text: &str) -> Result<Spec> {
    let doc = parse_document(text)?;
    let b = Builder { text };
    let module = match &doc.module {
        None => None,
        Some(spec) => {
            let m = spec.get_ref();
            let p = m
                .prime
                .ok_or_else(|| error_at(text, spec.span(), "[module] needs `prime`"))?;
            let r = m.r.ok_or_else(|| error_at(text, spec.span(), "[module] needs `r`"))?;
            Some(ModuleInfo {
                module: b.module(spec, p, r)?,
                precision: m.precision,
                guard: m.guard,
            })
        }
    };
    let tower = match (&doc.tower, &module) {
        (None, _) => None,
        (Some(t), None) => return Err(error_at(text, t.span(), "[tower] needs a [module] table")),
        (Some(t), Some(info)) => {
            let spec = t.get_ref();
            let base = info.module.clone();
            let (p, r) = (base.p(), base.r());
            let rho = RingAutomorphism::new(spec.rho.clone(), p)?;
            let phi = b.matrix(&spec.phi, r, p)?;
            Some(TowerInfo {
                tower: SemidirectModule::new(base, rho, phi)?,
                n_range: range(spec.n_min, spec.n_max, "tower n")?,
                m_range: range(spec.m_min, spec.m_max, "tower m")?,
            })
        }
    };
    let structure = match (&doc.structure, &module) {
        (None, _) => None,
        (Some(_), None) => return Err(Error::InvalidInput("[structure] needs a [module] table".into())),
        (Some(s), Some(info)) => {
            let (p, r) = (info.module.p(), info.module.r());
            let pairs = s
                .pairs
                .iter()
                .map(|pair| {
                    let generators = pair
                        .generators
                        .iter()
                        .map(|g| g.iter().map(|x| b.poly(x, r, p)).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    Ok(StructurePair {
                        tau: pair.tau.clone(),
                        generators,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Some(CMStructure::new(s.m0, pairs, p)?)
        }
    };
    let gamma = match &doc.gamma_module {
        None => None,
        Some(g) => {
            let spec = g.get_ref();
            Some(GammaInfo {
                prime: spec.prime,
                module: ZpGammaModule::new(spec.free_rank, spec.torsion.clone(), spec.gamma.clone(), spec.prime)?,
                n_range: range(spec.n_min, spec.n_max, "gamma_module n")?,
            })
        }
    };
    Ok(Spec {
        module,
        tower,
        structure,
        gamma,
        fit: doc.fit.map(|f| (f.prime, f.sequence)),
        run: doc.run.unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_one_based() {
        assert_eq!(position("ab\ncd", 0), (1, 1));
        assert_eq!(position("ab\ncd", 4), (2, 2));
    }

    #[test]
    fn unknown_field_is_an_error() {
        let err = parse_document("schema_version = 1\nbogus = 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn wrong_version() {
        let err = parse_document("schema_version = 7\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 18, .. }), "{err:?}");
    }

    #[test]
    fn polynomial_error_maps_into_the_document() {
        let text = "schema_version = 1\n[module]\nprime = 3\nr = 1\nconstructor = \"cyclic\"\nf = \"T1 + T2\"\n";
        match load_spec(text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (6, 11)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cyclic_module_and_tower() {
        let text = r#"
schema_version = 1

[module]
prime = 3
r = 1
constructor = "free"
rank = 1

[tower]
rho = [[4]]
phi = [["1"]]
n_max = 2
m_max = 2
"#;
        let spec = load_spec(text).unwrap();
        assert_eq!(spec.module.unwrap().module.b(), 1);
        assert_eq!(spec.tower.unwrap().m_range, 0..=2);
    }
}
