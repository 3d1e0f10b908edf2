use gpsofic_algnum::{
    certify, crossed_product_generators, crossed_product_microstate, det_plus,
    diagonal_is_constant, galois_orbit, liminf_certificate, AlgError, Certificate, CycInt,
    CycMatrix, RankThreshold,
};
use gpsofic_freeprob::{
    build_df, crossed_product_presentation, rank_defect_report, NcPoly, ProbError, Variables,
};
use serde::Deserialize;

use super::{body, Artifact, Output};
use crate::config::Source;
use crate::files::{MatrixEntry, MatrixFile};
use crate::output::{num, Table};
use crate::CliError;

fn one() -> f64 {
    1.0
}

fn four() -> usize {
    4
}

fn threshold(factor: f64) -> Result<RankThreshold, CliError> {
    if !(factor > 0.0) {
        return Err(CliError::schema("rank_factor", "must be positive"));
    }
    Ok(RankThreshold { factor })
}

fn parse_poly(text: &str, vars: &Variables, path: String) -> Result<NcPoly, CliError> {
    NcPoly::parse(text, vars).map_err(|e| match e {
        ProbError::Alg(AlgError::Resource(m)) => CliError::Resource(m),
        other => CliError::schema(path, other),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DetplusConfig {
    /// Multiplier of the default rank cutoff.
    #[serde(default = "one")]
    rank_factor: f64,
    /// Matrix file to certify one matrix at a time.
    matrices: Option<String>,
    /// Polynomials in `s1 = u`, `s2 = v` evaluated on the crossed-product
    /// microstates of `M_n` padded by `I_k`, `k = 1..=k_max`.
    polynomials: Option<Vec<String>>,
    crossed_product: Option<u32>,
    #[serde(default = "four")]
    k_max: usize,
}

const CERT_COLUMNS: [&str; 7] = [
    "det_plus",
    "det_plus_root",
    "galois_orbit_size",
    "conjugate_norm_bound",
    "certified_lower_bound",
    "holds",
    "degenerate",
];

fn cert_cells(c: &Certificate) -> Vec<String> {
    vec![
        num(c.det_plus.value),
        num(c.root),
        c.orbit_size.to_string(),
        num(c.norm_bound),
        num(c.bound),
        c.holds.to_string(),
        c.degenerate.to_string(),
    ]
}

fn header(lead: &[&'static str]) -> Vec<&'static str> {
    lead.iter().copied().chain(CERT_COLUMNS).collect()
}

pub(crate) fn detplus(src: &Source) -> Result<Artifact, CliError> {
    let cfg: DetplusConfig = body(src)?;
    let th = threshold(cfg.rank_factor)?;
    match (&cfg.matrices, &cfg.polynomials) {
        (Some(path), None) => {
            let path = src.resolve(path);
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let ms = MatrixFile::parse(&text)?.matrices()?;
            let mut table = Table::new(&header(&["index", "rows", "cols", "conductor", "rank"]));
            let mut failures = 0;
            for (i, m) in ms.iter().enumerate() {
                let mut row = vec![
                    i.to_string(),
                    m.rows().to_string(),
                    m.cols().to_string(),
                    m.conductor().to_string(),
                ];
                if m.is_square() {
                    let c = certify(m, th)?;
                    failures += usize::from(!c.holds);
                    row.push(c.det_plus.rank.to_string());
                    row.extend(cert_cells(&c));
                } else {
                    let dp = det_plus(&m.to_dense(), th);
                    row.extend([dp.rank.to_string(), num(dp.value)]);
                    row.extend(std::iter::repeat_n(String::new(), CERT_COLUMNS.len() - 1));
                }
                table.push(row);
            }
            let summary = vec![format!(
                "{} matrices, {failures} certificate failures",
                ms.len()
            )];
            Ok(Artifact {
                summary,
                ..Artifact::csv(table)
            })
        }
        (None, Some(polys)) => {
            let n = cfg.crossed_product.ok_or_else(|| {
                CliError::schema("crossed_product", "required with `polynomials`")
            })?;
            if cfg.k_max == 0 {
                return Err(CliError::schema("k_max", "must be positive"));
            }
            let vars = Variables::general(2);
            let (u, v) = crossed_product_generators(n)?;
            let sequence = (1..=cfg.k_max)
                .map(|k| {
                    Ok(vec![
                        u.kron(&CycMatrix::identity(k))?,
                        v.kron(&CycMatrix::identity(k))?,
                    ])
                })
                .collect::<Result<Vec<_>, AlgError>>()?;
            let mut table = Table::new(&header(&["polynomial", "k", "dim", "rank"]));
            let mut summary = Vec::new();
            for (i, text) in polys.iter().enumerate() {
                let p = parse_poly(text, &vars, format!("polynomials[{i}]"))?;
                let eval = |x: &[CycMatrix]| {
                    p.evaluate_exact(x).map_err(|e| match e {
                        ProbError::Alg(a) => a,
                        other => AlgError::Input(other.to_string()),
                    })
                };
                let t = liminf_certificate(&sequence, eval, th)?;
                for r in &t.rows {
                    let c = &r.certificate;
                    let mut row = vec![
                        p.to_string(),
                        (r.index + 1).to_string(),
                        c.dim.to_string(),
                        c.det_plus.rank.to_string(),
                    ];
                    row.extend(cert_cells(c));
                    table.push(row);
                }
                summary.push(format!(
                    "{p}: uniform bound {} {}",
                    t.uniform_bound,
                    if t.all_hold { "holds" } else { "FAILS" }
                ));
            }
            Ok(Artifact {
                summary,
                ..Artifact::csv(table)
            })
        }
        _ => Err(CliError::schema(
            "<root>",
            "give exactly one of `matrices` or `polynomials`",
        )),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MicrostatesConfig {
    crossed_product: u32,
    /// Also write the matrices in the matrix file format, next to the main output.
    matrices_out: Option<String>,
}

/// Zero or an `n`-th root of unity.
fn unit_or_zero(x: &CycInt, n: u32) -> bool {
    x.is_zero() || x.pow(n) == CycInt::one()
}

pub(crate) fn microstates(src: &Source) -> Result<Artifact, CliError> {
    let cfg: MicrostatesConfig = body(src)?;
    let n = cfg.crossed_product;
    if n == 0 {
        return Err(CliError::schema("crossed_product", "must be positive"));
    }
    let ms = crossed_product_microstate(n)?;
    let mut table = Table::new(&[
        "chi",
        "g",
        "dim",
        "normalized_trace_re",
        "normalized_trace_im",
        "diagonal_constant",
        "entries_zero_or_root_of_unity",
        "galois_orbit_size",
        "conjugate_norm_bound",
    ]);
    for (i, m) in ms.iter().enumerate() {
        let tr = m.trace().to_complex() / m.rows() as f64;
        let entries_ok =
            (0..m.rows()).all(|r| (0..m.cols()).all(|c| unit_or_zero(&m.get(r, c), n)));
        let orbit = galois_orbit(m);
        table.push(vec![
            (i / n as usize).to_string(),
            (i % n as usize).to_string(),
            m.rows().to_string(),
            num(tr.re),
            num(tr.im),
            diagonal_is_constant(m).to_string(),
            entries_ok.to_string(),
            orbit.size.to_string(),
            num(orbit.norm_bound),
        ]);
    }
    let mut extra = Vec::new();
    if let Some(p) = &cfg.matrices_out {
        let file = MatrixFile {
            matrices: ms
                .iter()
                .map(MatrixEntry::from_matrix)
                .collect::<Result<_, _>>()?,
        };
        extra.push((
            p.into(),
            Output::Json(serde_json::to_string(&file).expect("matrices serialize") + "\n"),
        ));
    }
    let summary = vec![format!("{} matrices of size {}", ms.len(), n * n)];
    Ok(Artifact {
        main: Output::Csv(table),
        extra,
        summary,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfConfig {
    /// Matrix sizes `n` of the presented algebras `M_n`.
    n: Vec<u32>,
    /// Replaces the built-in relations; polynomials in the self-adjoint `s1..s4`.
    relations: Option<Vec<String>>,
    #[serde(default = "one")]
    rank_factor: f64,
}

pub(crate) fn df_experiment(src: &Source) -> Result<Artifact, CliError> {
    let cfg: DfConfig = body(src)?;
    let th = threshold(cfg.rank_factor)?;
    let mut table = Table::new(&[
        "n",
        "microstate_size",
        "relations",
        "df_rows",
        "df_cols",
        "rank",
        "nullity",
        "kernel_fraction",
        "det_plus",
        "smallest_nonzero_singular_value",
        "largest_singular_value",
    ]);
    let mut summary = Vec::new();
    for (i, &n) in cfg.n.iter().enumerate() {
        if n == 0 || n > 4 {
            return Err(CliError::schema(
                format!("n[{i}]"),
                "supported sizes are 1 to 4",
            ));
        }
        let p = crossed_product_presentation(n)?;
        let relations = match &cfg.relations {
            Some(rs) => rs
                .iter()
                .enumerate()
                .map(|(j, r)| parse_poly(r, &p.vars, format!("relations[{j}]")))
                .collect::<Result<Vec<_>, _>>()?,
            None => p.relations.clone(),
        };
        let df = build_df(&relations, p.vars.len())?;
        let x: Vec<_> = p.generators.iter().map(CycMatrix::to_dense).collect();
        let size = x[0].nrows();
        let value = df.evaluate(&x)?;
        let r = rank_defect_report(&value, size, th);
        table.push(vec![
            n.to_string(),
            size.to_string(),
            relations.len().to_string(),
            value.nrows().to_string(),
            value.ncols().to_string(),
            r.rank.to_string(),
            r.nullity.to_string(),
            num(r.kernel_fraction),
            num(r.det_plus),
            r.smallest_nonzero.map(num).unwrap_or_default(),
            num(r.largest),
        ]);
        summary.push(format!(
            "n = {n}: nullity {} of {}, kernel fraction {}",
            r.nullity,
            value.ncols(),
            r.kernel_fraction
        ));
    }
    Ok(Artifact {
        summary,
        ..Artifact::csv(table)
    })
}

pub(crate) fn check(src: &Source, kind: super::Kind) -> Result<(), CliError> {
    match kind {
        super::Kind::Detplus => body::<DetplusConfig>(src).map(|_| ()),
        super::Kind::Microstates => body::<MicrostatesConfig>(src).map(|_| ()),
        _ => body::<DfConfig>(src).map(|_| ()),
    }
}
