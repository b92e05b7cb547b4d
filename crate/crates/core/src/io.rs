//! JSON and CSV documents for spaces, molecules, sequences, graphs, indices,
//! maps, measures and certificates. Documents refer to points by id; the
//! library works with indices.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{IndexFunction, WeightedGraph};
use crate::metric::{
    FiniteMetricSpace, LipschitzFunctional, Molecule, PairSequence, SquareMatrix, Violation,
};
use crate::summing::{Constant, MetricMap, PairSlack, PietschCertificate, ProbabilityMeasure};

/// Parses `text`, reporting schema violations with the path of the
/// offending field.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse { path, message: e.into_inner().to_string() }
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {}", path.display(), e)))?;
    from_json(&text).map_err(|e| match e {
        Error::Parse { path: field, message } => {
            Error::Parse { path: format!("{}: {}", path.display(), field), message }
        }
        other => other,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize to JSON")
}

fn lookup(ids: &[String], id: &str) -> Result<usize> {
    ids.iter()
        .position(|x| x == id)
        .ok_or_else(|| Error::input(format!("unknown point id {:?}", id)))
}

fn pair_ids(ids: &[String], (x, y): (usize, usize)) -> (String, String) {
    (ids[x].clone(), ids[y].clone())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    pub d: Vec<Vec<f64>>,
    /// Defaults to the first point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<String>,
    #[serde(default)]
    pub pseudometric: bool,
}

impl SpaceDoc {
    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        SpaceDoc {
            points: space.ids().to_vec(),
            d: space.matrix().to_rows(),
            base_point: Some(space.id(space.base()).to_string()),
            pseudometric: space.is_pseudometric(),
        }
    }

    pub fn to_space(&self) -> Result<FiniteMetricSpace> {
        let d = SquareMatrix::from_rows(&self.d)?;
        let base = match &self.base_point {
            Some(id) => lookup(&self.points, id)?,
            None => 0,
        };
        FiniteMetricSpace::new(self.points.clone(), d, base, self.pseudometric)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeDoc {
    pub coefficients: BTreeMap<String, f64>,
}

impl MoleculeDoc {
    pub fn to_molecule(&self, ids: &[String]) -> Result<Molecule> {
        let coefficients = self
            .coefficients
            .iter()
            .map(|(id, c)| Ok((lookup(ids, id)?, *c)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Molecule::new(coefficients)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    pub pairs: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl SequenceDoc {
    pub fn from_sequence(seq: &PairSequence, ids: &[String]) -> Self {
        SequenceDoc {
            pairs: seq.pairs().iter().map(|&p| pair_ids(ids, p)).collect(),
            weights: Some(seq.weights().to_vec()),
        }
    }

    pub fn to_sequence(&self, ids: &[String]) -> Result<PairSequence> {
        let pairs = self
            .pairs
            .iter()
            .map(|(x, y)| Ok((lookup(ids, x)?, lookup(ids, y)?)))
            .collect::<Result<Vec<_>>>()?;
        PairSequence::new(pairs, self.weights.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub u: String,
    pub v: String,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

impl GraphDoc {
    pub fn from_graph(g: &WeightedGraph) -> Self {
        GraphDoc {
            vertices: g.ids().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|&(u, v, w)| EdgeDoc { u: g.id(u).to_string(), v: g.id(v).to_string(), w })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<WeightedGraph> {
        let edges: Vec<(&str, &str, f64)> =
            self.edges.iter().map(|e| (e.u.as_str(), e.v.as_str(), e.w)).collect();
        WeightedGraph::from_named_edges(self.vertices.clone(), &edges)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexDoc {
    pub values: BTreeMap<String, f64>,
}

impl IndexDoc {
    pub fn from_function(f: &LipschitzFunctional, ids: &[String]) -> Self {
        IndexDoc { values: ids.iter().cloned().zip(f.values.iter().copied()).collect() }
    }

    /// Fails unless every id has a value and every value names an id.
    pub fn to_function(&self, ids: &[String]) -> Result<IndexFunction> {
        for id in self.values.keys() {
            lookup(ids, id)?;
        }
        let values = ids
            .iter()
            .map(|id| {
                self.values
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::input(format!("no value given for point {:?}", id)))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::input(format!("function value {} is not finite", v)));
        }
        Ok(LipschitzFunctional::new(values))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub domain: SpaceDoc,
    pub codomain: SpaceDoc,
    /// Image of every domain point, by id.
    pub images: BTreeMap<String, String>,
}

impl MapDoc {
    pub fn to_map(&self) -> Result<MetricMap> {
        let domain = self.domain.to_space()?;
        let codomain = self.codomain.to_space()?;
        for id in self.images.keys() {
            lookup(domain.ids(), id)?;
        }
        let images = domain
            .ids()
            .iter()
            .map(|id| {
                let target = self
                    .images
                    .get(id)
                    .ok_or_else(|| Error::input(format!("no image given for point {:?}", id)))?;
                lookup(codomain.ids(), target)
            })
            .collect::<Result<Vec<_>>>()?;
        MetricMap::new(domain, codomain, images)
    }
}

pub fn measure_from_ids(weights: &BTreeMap<String, f64>, ids: &[String]) -> Result<ProbabilityMeasure> {
    let by_index = weights
        .iter()
        .map(|(id, w)| Ok((lookup(ids, id)?, *w)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    ProbabilityMeasure::new(by_index)
}

pub fn measure_to_ids(mu: &ProbabilityMeasure, ids: &[String]) -> BTreeMap<String, f64> {
    mu.weights().iter().map(|(&i, &w)| (ids[i].clone(), w)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlackDoc {
    pub pair: (String, String),
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub p: f64,
    pub constant: Constant,
    pub measure: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    pub slack: Vec<SlackDoc>,
    #[serde(default)]
    pub dual_witness: Option<SequenceDoc>,
    #[serde(default)]
    pub witness_pair: Option<(String, String)>,
    #[serde(default)]
    pub skipped_zero: usize,
    #[serde(default)]
    pub flagged_tiny: Vec<(String, String)>,
}

impl CertificateDoc {
    pub fn from_certificate(cert: &PietschCertificate, ids: &[String]) -> Self {
        CertificateDoc {
            p: cert.p,
            constant: cert.constant,
            measure: cert.measure.as_ref().map(|mu| measure_to_ids(mu, ids)),
            slack: cert
                .slack
                .iter()
                .map(|s| SlackDoc { pair: pair_ids(ids, (s.x, s.y)), value: s.value })
                .collect(),
            dual_witness: cert.dual_witness.as_ref().map(|w| SequenceDoc::from_sequence(w, ids)),
            witness_pair: cert.witness_pair.map(|p| pair_ids(ids, p)),
            skipped_zero: cert.skipped_zero,
            flagged_tiny: cert.flagged_tiny.iter().map(|&p| pair_ids(ids, p)).collect(),
        }
    }

    pub fn to_certificate(&self, ids: &[String]) -> Result<PietschCertificate> {
        let measure = self.measure.as_ref().map(|m| measure_from_ids(m, ids)).transpose()?;
        if self.constant.is_finite() != measure.is_some() {
            return Err(Error::input("a certificate has a measure exactly when its constant is finite"));
        }
        let to_pair = |(x, y): &(String, String)| Ok::<_, Error>((lookup(ids, x)?, lookup(ids, y)?));
        Ok(PietschCertificate {
            p: self.p,
            constant: self.constant,
            measure,
            slack: self
                .slack
                .iter()
                .map(|s| {
                    let (x, y) = to_pair(&s.pair)?;
                    Ok(PairSlack { x, y, value: s.value })
                })
                .collect::<Result<_>>()?,
            dual_witness: self.dual_witness.as_ref().map(|w| w.to_sequence(ids)).transpose()?,
            witness_pair: self.witness_pair.as_ref().map(to_pair).transpose()?,
            skipped_zero: self.skipped_zero,
            flagged_tiny: self.flagged_tiny.iter().map(to_pair).collect::<Result<_>>()?,
        })
    }
}

/// A metric axiom violation with points named by id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationDoc {
    pub axiom: &'static str,
    pub points: Vec<String>,
    pub value: f64,
}

impl ViolationDoc {
    pub fn new(v: &Violation, ids: &[String]) -> Self {
        let name = |i: &usize| ids[*i].clone();
        let (axiom, points, value) = match v {
            Violation::Negative { i, j, value } => ("negative", vec![name(i), name(j)], *value),
            Violation::NonzeroDiagonal { i, value } => ("nonzero_diagonal", vec![name(i)], *value),
            Violation::Asymmetric { i, j, forward, backward } => {
                ("asymmetric", vec![name(i), name(j)], forward - backward)
            }
            Violation::ZeroDistance { i, j } => ("zero_distance", vec![name(i), name(j)], 0.0),
            Violation::Triangle { i, j, k, excess } => ("triangle", vec![name(i), name(j), name(k)], *excess),
        };
        ViolationDoc { axiom, points, value }
    }
}

/// CSV with a header row and a leading column of ids.
pub fn matrix_to_csv(ids: &[String], m: &SquareMatrix) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = std::iter::once("").chain(ids.iter().map(String::as_str)).collect();
    w.write_record(&header).expect("write to memory");
    for (i, id) in ids.iter().enumerate() {
        let row: Vec<String> =
            std::iter::once(id.clone()).chain(m.row(i).iter().map(|v| format!("{}", v))).collect();
        w.write_record(&row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("CSV output is UTF-8")
}

/// Reads a matrix written by [`matrix_to_csv`]; the row ids must repeat the
/// header ids in order.
pub fn matrix_from_csv(text: &str) -> Result<(Vec<String>, SquareMatrix)> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let parse_err = |line: u64, message: String| Error::Parse { path: format!("line {}", line), message };
    let header = r.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    let ids: Vec<String> = header.iter().skip(1).map(String::from).collect();
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let line = i as u64 + 2;
        let record = record.map_err(|e| parse_err(line, e.to_string()))?;
        match (record.get(0), ids.get(i)) {
            (Some(id), Some(expected)) if id == expected => {}
            (got, _) => return Err(parse_err(line, format!("row id {:?} does not follow the header order", got))),
        }
        let row = record
            .iter()
            .skip(1)
            .map(|s| s.trim().parse::<f64>().map_err(|e| parse_err(line, format!("{:?}: {}", s, e))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.len() != ids.len() {
        return Err(parse_err(rows.len() as u64 + 1, format!("{} ids but {} rows", ids.len(), rows.len())));
    }
    Ok((ids, SquareMatrix::from_rows(&rows)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_error_has_path() {
        let err = from_json::<SpaceDoc>(r#"{"points": ["a"], "d": [["x"]]}"#).unwrap_err();
        match err {
            Error::Parse { path, .. } => assert_eq!(path, "d[0][0]"),
            other => panic!("{:?}", other),
        }
        assert!(matches!(from_json::<GraphDoc>(r#"{"vertices": [], "edges": [], "x": 1}"#), Err(Error::Parse { .. })));
    }

    #[test]
    fn space_round_trip() {
        let doc: SpaceDoc = from_json(r#"{"points": ["a", "b"], "d": [[0, 2], [2, 0]], "base_point": "b"}"#).unwrap();
        let space = doc.to_space().unwrap();
        assert_eq!(space.base(), 1);
        assert_eq!(SpaceDoc::from_space(&space), doc);
    }

    #[test]
    fn index_must_be_total() {
        let ids = vec!["a".to_string(), "b".to_string()];
        let doc: IndexDoc = from_json(r#"{"values": {"a": 1}}"#).unwrap();
        assert!(doc.to_function(&ids).is_err());
        let doc: IndexDoc = from_json(r#"{"values": {"a": 1, "b": 2, "c": 3}}"#).unwrap();
        assert!(doc.to_function(&ids).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let ids = vec!["a".to_string(), "b,c".to_string()];
        let m = SquareMatrix::from_rows(&[vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
        let text = matrix_to_csv(&ids, &m);
        assert!(text.starts_with(",a,\"b,c\"\n"));
        assert_eq!(matrix_from_csv(&text).unwrap(), (ids, m));
        assert!(matrix_from_csv(",a\nb,0\n").is_err());
    }
}
