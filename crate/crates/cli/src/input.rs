//! Building fields, modules and biderivations from flags or `--file` JSON.

use std::fs;
use std::path::Path;

use drinfeld_ext::biderivation::Biderivation;
use drinfeld_ext::ext::{dual_tmodule, normalize_leading};
use drinfeld_ext::field::{Fq, FqConfig};
use drinfeld_ext::json::{decode_drinfeld, from_str, BiderivationJson, TModuleJson};
use drinfeld_ext::parse::parse_matrix;
use drinfeld_ext::tmodule::{carlitz_tensor, DrinfeldModule, TModule};
use drinfeld_ext::{Error, Result};
use serde_json::Value;

/// What a `--file` holds.
pub enum FileSpec {
    Module(TModuleJson),
    Biderivation(BiderivationJson),
}

impl FileSpec {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let value: Value = from_str(&text)?;
        if value.get("delta_t").is_some() {
            Ok(FileSpec::Biderivation(from_str(&text)?))
        } else {
            Ok(FileSpec::Module(from_str(&text)?))
        }
    }

    fn config(&self) -> &FqConfig {
        match self {
            FileSpec::Module(m) => &m.q,
            FileSpec::Biderivation(b) => &b.source.q,
        }
    }
}

/// Resolves the field: from the file when one is given (a conflicting
/// `--q` is an error), otherwise from `--q`/`--modulus`.
pub fn field(q: Option<u64>, modulus: Option<&str>, file: Option<&FileSpec>, limit: usize) -> Result<Fq> {
    let config = match file {
        Some(f) => {
            let c = f.config().clone();
            if q.is_some_and(|q| q != c.q()) {
                return Err(Error::Input(format!("--q {} conflicts with F_{} in the input file", q.unwrap(), c.q())));
            }
            c
        }
        None => FqConfig::for_order(q.unwrap_or(2), modulus)?,
    };
    Ok(Fq::new(config)?.with_degree_limit(limit))
}

fn split_list(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).collect()
}

/// Parses `a;b` / `a,b;c,d` as a matrix: rows split on `;`, entries on `,`.
pub fn matrix_arg(fq: &Fq, text: &str) -> Result<drinfeld_ext::skew::SkewMatrix> {
    let rows: Vec<Vec<&str>> = text.split(';').map(split_list).collect();
    parse_matrix(fq, &rows)
}

/// The Drinfeld module given by `--drinfeld a_1,...,a_r` or a module file.
pub fn drinfeld(fq: &Fq, inline: Option<&str>, file: Option<&FileSpec>) -> Result<DrinfeldModule> {
    match (inline, file) {
        (Some(text), _) => decode_drinfeld(fq, &split_list(text)),
        (None, Some(FileSpec::Module(m))) => m.decode_drinfeld(fq),
        (None, Some(FileSpec::Biderivation(b))) => b.source.decode_drinfeld(fq),
        (None, None) => Err(Error::Input("a module is required: pass --drinfeld or --file".into())),
    }
}

pub fn maybe_normalize(e: DrinfeldModule, normalize: bool) -> Result<(DrinfeldModule, Option<drinfeld_ext::field::KElement>)> {
    if normalize && !e.a(e.rank()).is_one() {
        let (n, c) = normalize_leading(&e)?;
        Ok((n, Some(c)))
    } else {
        Ok((e, None))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    /// Ext¹(E, C) for a Drinfeld module E of rank >= 2.
    EVsC,
    /// Ext¹(E^∨, C), E monic of rank >= 2.
    DualVsC,
    /// Ext¹(C^⊗m, C^⊗n), n > m.
    Carlitz,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::EVsC => "e-vs-c",
            Kind::DualVsC => "dual-vs-c",
            Kind::Carlitz => "carlitz",
        }
    }
}

/// A reducer together with the modules it expects.
pub enum Context {
    EVsC(DrinfeldModule),
    DualVsC(DrinfeldModule),
    Carlitz(usize, usize),
}

impl Context {
    pub fn endpoints(&self, fq: &Fq) -> Result<(TModule, TModule)> {
        let carlitz = DrinfeldModule::carlitz(fq).as_tmodule().clone();
        match self {
            Context::EVsC(e) => Ok((e.as_tmodule().clone(), carlitz)),
            Context::DualVsC(e) => Ok((dual_tmodule(e)?.dual, carlitz)),
            Context::Carlitz(m, n) => Ok((carlitz_tensor(fq, *m)?, carlitz_tensor(fq, *n)?)),
        }
    }
}

pub struct BiderivationArgs<'a> {
    pub drinfeld: Option<&'a str>,
    pub value: Option<&'a str>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub normalize: bool,
}

/// The reducer context and the biderivation to feed it.
pub fn biderivation(
    fq: &Fq,
    kind: Kind,
    args: &BiderivationArgs,
    file: Option<&FileSpec>,
) -> Result<(Context, Biderivation)> {
    let context = match kind {
        Kind::EVsC => Context::EVsC(drinfeld(fq, args.drinfeld, file)?),
        Kind::DualVsC => {
            let e = match (args.drinfeld, file) {
                (None, Some(FileSpec::Biderivation(_))) => {
                    return Err(Error::Input("dual-vs-c needs --drinfeld to identify E".into()))
                }
                _ => drinfeld(fq, args.drinfeld, file)?,
            };
            Context::DualVsC(maybe_normalize(e, args.normalize)?.0)
        }
        Kind::Carlitz => match (args.m, args.n, file) {
            (Some(m), Some(n), _) => Context::Carlitz(m, n),
            (None, None, Some(FileSpec::Biderivation(b))) => {
                let dim = |m: &TModuleJson| m.decode(fq).map(|t| t.dim());
                Context::Carlitz(dim(&b.source)?, dim(&b.target)?)
            }
            _ => return Err(Error::Input("carlitz needs --m and --n".into())),
        },
    };
    let delta = match (args.value, file) {
        (Some(text), _) => {
            let (source, target) = context.endpoints(fq)?;
            Biderivation::new(source, target, matrix_arg(fq, text)?)?
        }
        (None, Some(FileSpec::Biderivation(b))) => b.decode(fq)?,
        _ => return Err(Error::Input("a biderivation is required: pass --value or a --file with delta_t".into())),
    };
    Ok((context, delta))
}
