use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use k3lab::k3lattice::{
    builtin, certify_ample, certify_bn_general, certify_nef, enumerate_slice, lm_invariants, max_admissible_size,
    moduli_dimensions, verify_fiber_chain_genus8, bordered_gram, DivisorClass, GramLattice, Orientation,
    PolarizedLattice, Status, SCHEMA,
};
use serde::Deserialize;
use serde_json::json;

use crate::{emit, CmdResult, Exit, Failure};

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// One of U3, M6, N1..N9
    #[arg(long)]
    builtin: Option<String>,
    /// JSON file: {"gram": [[..]], "rank"?, "labels"?, "polarization"?, "reference_nef"?}
    #[arg(long)]
    gram: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Orient {
    Any,
    Effective,
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Inertia (n_plus, n_minus, n_zero) of the Gram matrix
    Signature(Source),
    /// Classes of given degree and square
    Census {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        square: i64,
        #[arg(long, value_enum, default_value_t = Orient::Effective)]
        orient: Orient,
    },
    /// Ampleness and Brill-Noether certificates
    Certify {
        #[command(flatten)]
        source: Source,
        /// Also certify every isotropic basis class of positive degree as nef
        #[arg(long)]
        nef: bool,
    },
    /// Dimensions of the lattice-polarized moduli spaces
    Dims {
        #[command(flatten)]
        source: Source,
        /// Genus (default: from L^2)
        #[arg(long)]
        genus: Option<i64>,
    },
    /// Genus-8 fiber-dimension bound for an elliptic pencil E
    FiberChain {
        #[command(flatten)]
        source: Source,
        /// Coordinates of E, comma separated (default: second basis vector)
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        class: Option<Vec<i64>>,
    },
    /// Lazarsfeld-Mukai bundle invariants of a g^r_d
    Lm {
        #[arg(long)]
        genus: i64,
        #[arg(long)]
        degree: i64,
        #[arg(long, default_value_t = 1)]
        index: i64,
    },
    /// Largest hyperbolic bordered pattern
    RankBound {
        #[arg(long)]
        genus: i64,
        #[arg(long)]
        degree: i64,
        #[arg(long)]
        mutual: i64,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GramFile {
    rank: Option<usize>,
    gram: Vec<Vec<i64>>,
    labels: Option<Vec<String>>,
    polarization: Option<Vec<i64>>,
    reference_nef: Option<Vec<i64>>,
}

struct Loaded {
    name: String,
    lattice: GramLattice,
    polarization: Option<DivisorClass>,
    reference_nef: Option<DivisorClass>,
}

impl Loaded {
    fn polarized(&self) -> Result<PolarizedLattice, Failure> {
        let n = self.lattice.rank();
        let l = self.polarization.clone().unwrap_or_else(|| DivisorClass::basis(n, 0));
        let h = self.reference_nef.clone().unwrap_or_else(|| l.clone());
        PolarizedLattice::new(self.lattice.clone(), l, h).map_err(Failure::malformed)
    }
}

fn load(src: &Source) -> Result<Loaded, Failure> {
    if let Some(name) = &src.builtin {
        let pl = builtin(name).map_err(Failure::malformed)?;
        return Ok(Loaded {
            name: name.clone(),
            lattice: pl.lattice().clone(),
            polarization: Some(pl.polarization().clone()),
            reference_nef: Some(pl.reference_nef().clone()),
        });
    }
    let path = src.gram.as_ref().expect("clap enforces one source");
    let text = std::fs::read_to_string(path).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
    let file: GramFile =
        serde_json::from_str(&text).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
    if let Some(n) = file.rank {
        if n != file.gram.len() {
            return Err(Failure::malformed(format!("rank {n} does not match a {}-row gram matrix", file.gram.len())));
        }
    }
    let lattice = match file.labels {
        Some(labels) => GramLattice::new(file.gram, labels),
        None => GramLattice::unlabeled(file.gram),
    }
    .map_err(Failure::malformed)?;
    Ok(Loaded {
        name: path.display().to_string(),
        lattice,
        polarization: file.polarization.map(DivisorClass),
        reference_nef: file.reference_nef.map(DivisorClass),
    })
}

fn verdict(ok: bool) -> Exit {
    if ok {
        Exit::Ok
    } else {
        Exit::Fail
    }
}

pub fn run(cmd: LatticeCmd) -> CmdResult {
    match cmd {
        LatticeCmd::Signature(src) => {
            let l = load(&src)?;
            let sig = l.lattice.signature();
            eprintln!("{}: signature ({}, {}, {})", l.name, sig.n_plus, sig.n_minus, sig.n_zero);
            emit(&json!({
                "schema": SCHEMA,
                "lattice": l.name,
                "signature": sig,
                "hyperbolic": sig.is_hyperbolic(),
            }));
            Ok(Exit::Ok)
        }
        LatticeCmd::Census { source, degree, square, orient } => {
            let l = load(&source)?;
            let pl = l.polarized()?;
            let orient = match orient {
                Orient::Any => Orientation::Any,
                Orient::Effective => Orientation::Effective,
            };
            let census = enumerate_slice(&pl, degree, square, orient).map_err(Failure::malformed)?;
            eprintln!("{}: {} classes of degree {degree} and square {square}", l.name, census.count());
            emit(&json!({
                "schema": SCHEMA,
                "lattice": l.name,
                "count": census.count(),
                "census": census,
            }));
            Ok(Exit::Ok)
        }
        LatticeCmd::Certify { source, nef } => {
            let l = load(&source)?;
            let pl = l.polarized()?;
            let ample = certify_ample(&pl).map_err(Failure::malformed)?;
            // Brill-Noether generality presupposes an ample polarization
            let bn = if ample.passed() { Some(certify_bn_general(&pl).map_err(Failure::malformed)?) } else { None };
            let mut nefs = Vec::new();
            if nef {
                for i in 0..pl.rank() {
                    let e = DivisorClass::basis(pl.rank(), i);
                    if pl.square(&e) == 0 && pl.degree(&e) > 0 {
                        nefs.push(certify_nef(&pl, &e).map_err(Failure::malformed)?);
                    }
                }
            }
            let ok = ample.passed() && bn.as_ref().is_some_and(|c| c.passed()) && nefs.iter().all(|c| c.passed());
            let status = Status::from_bool(ok);
            eprintln!(
                "{}: ample {:?}, BN general {}, nef {}/{} -> {status:?}",
                l.name,
                ample.status,
                bn.as_ref().map_or("skipped".to_string(), |c| format!("{:?}", c.status)),
                nefs.iter().filter(|c| c.passed()).count(),
                nefs.len(),
            );
            emit(&json!({
                "schema": SCHEMA,
                "lattice": l.name,
                "status": status,
                "ample": ample,
                "bn_general": bn,
                "nef": nefs,
            }));
            Ok(verdict(ok))
        }
        LatticeCmd::Dims { source, genus } => {
            let l = load(&source)?;
            let g = match genus {
                Some(g) => g,
                None => l.polarized()?.genus(),
            };
            let d = moduli_dimensions(&l.lattice, g).map_err(Failure::malformed)?;
            eprintln!("{}: dim F = {}, dim P = {}", l.name, d.dim_f, d.dim_p);
            emit(&json!({ "schema": SCHEMA, "lattice": l.name, "genus": g, "dim_F": d.dim_f, "dim_P": d.dim_p }));
            Ok(Exit::Ok)
        }
        LatticeCmd::FiberChain { source, class } => {
            let l = load(&source)?;
            let pl = l.polarized()?;
            let e = match class {
                Some(c) => DivisorClass(c),
                None if pl.rank() >= 2 => DivisorClass::basis(pl.rank(), 1),
                None => return Err(Failure::malformed("lattice has no second basis vector; pass --class")),
            };
            let rep = verify_fiber_chain_genus8(&pl, &e).map_err(Failure::malformed)?;
            eprintln!("{}: fiber chain {:?}, bound {}", l.name, rep.status, rep.bound);
            let ok = rep.status.is_pass();
            emit(&rep);
            Ok(verdict(ok))
        }
        LatticeCmd::Lm { genus, degree, index } => {
            let inv = lm_invariants(genus, degree, index).map_err(Failure::malformed)?;
            eprintln!("g^{index}_{degree} in genus {genus}: chi = {}, {:?}", inv.chi, inv.verdict);
            emit(&json!({ "schema": SCHEMA, "genus": genus, "degree": degree, "index": index, "invariants": inv }));
            Ok(Exit::Ok)
        }
        LatticeCmd::RankBound { genus, degree, mutual } => {
            if degree < 1 || mutual < 0 || genus < 2 {
                return Err(Failure::malformed("need genus >= 2, degree >= 1, mutual >= 0"));
            }
            let n = max_admissible_size(genus, degree, mutual);
            let next = k3lab::exactlin::signature(&bordered_gram(genus, degree, mutual, n + 1)).map_err(Failure::malformed)?;
            eprintln!("largest hyperbolic pattern: {n} (size {} has signature {next:?})", n + 1);
            emit(&json!({
                "schema": SCHEMA,
                "genus": genus,
                "degree": degree,
                "mutual": mutual,
                "max_size": n,
                "pencils": n.saturating_sub(1),
                "next_signature": next,
            }));
            Ok(Exit::Ok)
        }
    }
}
