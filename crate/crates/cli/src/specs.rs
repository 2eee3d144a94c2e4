//! Parsers turning CLI strings into algebras, states, and density matrices.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use hpurity::{
    bipartite_algebra, fermion_so_algebra, fermion_u_algebra, ghz, haar_random,
    local_qubit_algebra, product_state, spin_algebra, spin_coherent, w_state, werner,
    DensityMatrix, ObservableAlgebra, PureState,
};

/// Numeric parameters an algebra or state spec may consume.
#[derive(Debug, Clone, Default)]
pub struct SpecParams {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub nb: Option<usize>,
    pub j: Option<f64>,
    pub copies: Option<usize>,
}

impl SpecParams {
    fn need_n(&self, who: &str) -> Result<usize> {
        self.n.ok_or_else(|| anyhow!("{who} requires --n"))
    }
}

/// Build a named algebra: local-qubits, bipartite, spin, collective-spin,
/// fermion-u, fermion-so.
pub fn build_algebra(name: &str, p: &SpecParams) -> Result<ObservableAlgebra> {
    let alg = match name {
        "local-qubits" => local_qubit_algebra(p.need_n("--algebra local-qubits")?)?,
        "bipartite" => {
            let m = p.m.ok_or_else(|| anyhow!("--algebra bipartite requires --m"))?;
            let nb = p
                .nb
                .ok_or_else(|| anyhow!("--algebra bipartite requires --nb"))?;
            bipartite_algebra(m, nb)?
        }
        "spin" => {
            let j = p.j.ok_or_else(|| anyhow!("--algebra spin requires --j"))?;
            spin_algebra(j, 1)?
        }
        "collective-spin" => {
            let j = p
                .j
                .ok_or_else(|| anyhow!("--algebra collective-spin requires --j"))?;
            spin_algebra(j, p.copies.unwrap_or(2))?
        }
        "fermion-u" => fermion_u_algebra(p.need_n("--algebra fermion-u")?)?,
        "fermion-so" => fermion_so_algebra(p.need_n("--algebra fermion-so")?)?,
        other => bail!("--algebra: unknown algebra '{other}'"),
    };
    Ok(alg)
}

/// Build a named state for the given Hilbert-space dimension.
///
/// Grammar: `ghz` | `w` | `up` | `basis:<index>` | `haar:<seed>` |
/// `coherent:<theta>,<phi>` | `product:<theta>,<phi>;...` | `csv:<path>`.
pub fn build_state(spec: &str, dim: usize, p: &SpecParams) -> Result<PureState> {
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    let state = match head {
        "ghz" => ghz(p.need_n("--state ghz")?)?,
        "w" => w_state(p.need_n("--state w")?)?,
        "up" => PureState::basis_state(dim, 0)?,
        "basis" => {
            let idx: usize = arg
                .ok_or_else(|| anyhow!("--state basis:<index>"))?
                .parse()
                .context("--state basis index")?;
            PureState::basis_state(dim, idx)?
        }
        "haar" => {
            let seed: u64 = arg
                .ok_or_else(|| anyhow!("--state haar:<seed>"))?
                .parse()
                .context("--state haar seed")?;
            haar_random(dim, seed)?
        }
        "coherent" => {
            let arg = arg.ok_or_else(|| anyhow!("--state coherent:<theta>,<phi>"))?;
            let parts: Vec<&str> = arg.split(',').collect();
            if parts.len() != 2 {
                bail!("--state coherent:<theta>,<phi>");
            }
            let theta: f64 = parts[0].parse().context("--state coherent theta")?;
            let phi: f64 = parts[1].parse().context("--state coherent phi")?;
            let j = p.j.ok_or_else(|| anyhow!("--state coherent requires --j"))?;
            spin_coherent(j, theta, phi)?
        }
        "product" => {
            let arg = arg.ok_or_else(|| anyhow!("--state product:<theta>,<phi>;..."))?;
            let mut bloch = Vec::new();
            for site in arg.split(';') {
                let parts: Vec<&str> = site.split(',').collect();
                if parts.len() != 2 {
                    bail!("--state product: each site needs <theta>,<phi>");
                }
                let theta: f64 = parts[0].parse().context("--state product theta")?;
                let phi: f64 = parts[1].parse().context("--state product phi")?;
                bloch.push([
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                ]);
            }
            product_state(&bloch)?
        }
        "csv" => {
            let path = arg.ok_or_else(|| anyhow!("--state csv:<path>"))?;
            let file = File::open(path).with_context(|| format!("--state csv: open {path}"))?;
            PureState::from_csv(BufReader::new(file), dim)?
        }
        other => bail!("--state: unknown state '{other}'"),
    };
    if state.dim() != dim {
        bail!(
            "--state: state dimension {} does not match the algebra dimension {dim}",
            state.dim()
        );
    }
    Ok(state)
}

/// Build a density matrix.
///
/// Grammar: `werner:<p>` | `maxmixed` | `pure:<statespec>` |
/// `rank2:<seed>` | `csv:<path>` (lines `i,j,re,im`).
pub fn build_rho(spec: &str, dim: usize, p: &SpecParams) -> Result<DensityMatrix> {
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    let rho = match head {
        "werner" => {
            let w: f64 = arg
                .ok_or_else(|| anyhow!("--rho werner:<p>"))?
                .parse()
                .context("--rho werner weight")?;
            if dim != 4 {
                bail!("--rho werner needs a two-qubit algebra (dimension 4, got {dim})");
            }
            werner(w)?
        }
        "maxmixed" => DensityMatrix::maximally_mixed(dim),
        "pure" => {
            let sub = arg.ok_or_else(|| anyhow!("--rho pure:<statespec>"))?;
            DensityMatrix::from_pure(&build_state(sub, dim, p)?)
        }
        "rank2" => {
            let seed: u64 = arg
                .ok_or_else(|| anyhow!("--rho rank2:<seed>"))?
                .parse()
                .context("--rho rank2 seed")?;
            let a = haar_random(dim, seed.wrapping_mul(2).wrapping_add(1))?;
            let b = haar_random(dim, seed.wrapping_mul(2).wrapping_add(2))?;
            DensityMatrix::mixture(&[(0.5, a), (0.5, b)])?
        }
        "csv" => {
            let path = arg.ok_or_else(|| anyhow!("--rho csv:<path>"))?;
            let file = File::open(path).with_context(|| format!("--rho csv: open {path}"))?;
            let mut m = ndarray_zeros(dim);
            for (lineno, line) in BufReader::new(file).lines().enumerate() {
                let line = line?;
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                let parts: Vec<&str> = t.split(',').map(str::trim).collect();
                if parts.len() != 4 {
                    bail!("--rho csv line {}: expected `i,j,re,im`", lineno + 1);
                }
                let i: usize = parts[0].parse()?;
                let j: usize = parts[1].parse()?;
                let re: f64 = parts[2].parse()?;
                let im: f64 = parts[3].parse()?;
                if i >= dim || j >= dim {
                    bail!("--rho csv line {}: index out of range", lineno + 1);
                }
                m[[i, j]] = num_complex::Complex64::new(re, im);
            }
            DensityMatrix::new(m)?
        }
        other => bail!("--rho: unknown density matrix '{other}'"),
    };
    if rho.dim() != dim {
        bail!(
            "--rho: density dimension {} does not match the algebra dimension {dim}",
            rho.dim()
        );
    }
    Ok(rho)
}

fn ndarray_zeros(dim: usize) -> ndarray::Array2<num_complex::Complex64> {
    ndarray::Array2::zeros((dim, dim))
}

/// Parse a `key = value` config file; later keys override earlier ones.
pub fn read_config(path: &Path) -> Result<HashMap<String, String>> {
    let file = File::open(path).with_context(|| format!("--config: open {}", path.display()))?;
    let mut map = HashMap::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| anyhow!("--config line {}: expected `key = value`", lineno + 1))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Flag value if present, else the config value parsed, else None.
pub fn merged<T: std::str::FromStr>(
    flag: Option<T>,
    cfg: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    match cfg.get(key) {
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|e| anyhow!("--config {key} = {raw}: {e}")),
        None => Ok(None),
    }
}
