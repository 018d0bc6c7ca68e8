//! The JSON instance format: a base complex, a cover, and a base set.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use vkampen::complex::{
    cover_to_map, find_section, star_cover, BaseSet, CellMap, Complex2, EdgeId, FaceId, Section, SectionedCover,
    Subcomplex, VertexId,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub complex: ComplexDoc,
    pub cover: CoverDoc,
    pub base_set: BaseSetDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub faces: Vec<FaceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub name: String,
    pub src: String,
    pub dst: String,
}

/// A face with its boundary read from `start`, e.g. `"a b^-1"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceDoc {
    pub name: String,
    pub start: String,
    pub boundary: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faces: Vec<String>,
}

/// Cell names of the total complex, keyed by base cell name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionDoc {
    pub piece: String,
    #[serde(default)]
    pub vertices: BTreeMap<String, String>,
    #[serde(default)]
    pub edges: BTreeMap<String, String>,
    #[serde(default)]
    pub faces: BTreeMap<String, String>,
}

/// The map `p: E → B`, as base cell names keyed by total cell name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub total: ComplexDoc,
    pub vertices: BTreeMap<String, String>,
    #[serde(default)]
    pub edges: BTreeMap<String, String>,
    #[serde(default)]
    pub faces: BTreeMap<String, String>,
}

/// Either pieces alone (the cover is their coproduct), `"stars"`, or a map
/// with optional pieces (default: vertex stars) and optional sections
/// (default: searched for).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum CoverDoc {
    Stars(String),
    Map {
        map: MapDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pieces: Option<Vec<PieceDoc>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sections: Option<Vec<SectionDoc>>,
    },
    Pieces {
        pieces: Vec<PieceDoc>,
    },
}

/// `"all"`, a single vertex name, or a list of vertex names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseSetDoc {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub cover: SectionedCover,
    pub base_set: BaseSet,
}

pub fn parse(text: &str) -> Result<InstanceDocument> {
    serde_json::from_str(text).map_err(|e| anyhow!("invalid document at line {}, column {}: {e}", e.line(), e.column()))
}

pub fn to_json(doc: &InstanceDocument) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize") + "\n"
}

fn build_complex(doc: &ComplexDoc, field: &str) -> Result<Complex2> {
    let mut c = Complex2::new();
    for (i, v) in doc.vertices.iter().enumerate() {
        c.add_vertex(v).with_context(|| format!("{field}.vertices[{i}]"))?;
    }
    for (i, e) in doc.edges.iter().enumerate() {
        let at = || format!("{field}.edges[{i}]");
        let src = c.vertex_by_name(&e.src).with_context(at)?;
        let dst = c.vertex_by_name(&e.dst).with_context(at)?;
        c.add_edge(&e.name, src, dst).with_context(at)?;
    }
    for (i, f) in doc.faces.iter().enumerate() {
        let at = || format!("{field}.faces[{i}]");
        let boundary = c.parse_path(&f.start, &f.boundary).with_context(at)?;
        c.add_face(&f.name, boundary).with_context(at)?;
    }
    Ok(c)
}

fn build_piece(b: &Complex2, p: &PieceDoc, field: &str) -> Result<Subcomplex> {
    let vertices = p
        .vertices
        .iter()
        .enumerate()
        .map(|(j, v)| b.vertex_by_name(v).with_context(|| format!("{field}.vertices[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    let edges = p
        .edges
        .iter()
        .enumerate()
        .map(|(j, e)| b.edge_by_name(e).with_context(|| format!("{field}.edges[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    let faces = p
        .faces
        .iter()
        .enumerate()
        .map(|(j, f)| b.face_by_name(f).with_context(|| format!("{field}.faces[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subcomplex::closure_of(b, &p.name, &vertices, &edges, &faces))
}

fn build_pieces(b: &Complex2, pieces: &[PieceDoc]) -> Result<Vec<Subcomplex>> {
    pieces.iter().enumerate().map(|(i, p)| build_piece(b, p, &format!("cover.pieces[{i}]"))).collect()
}

fn build_map(b: &Complex2, e: &Complex2, m: &MapDoc) -> Result<CellMap> {
    fn lookup<T>(
        names: &BTreeMap<String, String>,
        field: &str,
        domain: &[String],
        find: impl Fn(&str) -> vkampen::Result<T>,
    ) -> Result<Vec<T>> {
        for k in names.keys() {
            if !domain.contains(k) {
                bail!("cover.map.{field}: `{k}` is not a cell of the total complex");
            }
        }
        domain
            .iter()
            .map(|n| {
                let target = names.get(n).ok_or_else(|| anyhow!("cover.map.{field}: `{n}` has no image"))?;
                find(target).with_context(|| format!("cover.map.{field}.{n}"))
            })
            .collect()
    }
    let edge_names: Vec<String> = e.edges().iter().map(|x| x.name.clone()).collect();
    let face_names: Vec<String> = e.faces().iter().map(|x| x.name.clone()).collect();
    let vertex_map = lookup(&m.vertices, "vertices", e.vertices(), |n| b.vertex_by_name(n))?;
    let edge_map = lookup(&m.edges, "edges", &edge_names, |n| b.edge_by_name(n))?;
    let face_map = lookup(&m.faces, "faces", &face_names, |n| b.face_by_name(n))?;
    CellMap::new(e, b, vertex_map, edge_map, face_map).context("cover.map")
}

fn build_section(b: &Complex2, e: &Complex2, s: &SectionDoc, field: &str) -> Result<Section> {
    let mut out = Section {
        vertex: vec![None; b.vertex_count()],
        edge: vec![None; b.edge_count()],
        face: vec![None; b.face_count()],
    };
    for (k, v) in &s.vertices {
        let at = || format!("{field}.vertices.{k}");
        out.vertex[b.vertex_by_name(k).with_context(at)?.0] = Some(e.vertex_by_name(v).with_context(at)?);
    }
    for (k, v) in &s.edges {
        let at = || format!("{field}.edges.{k}");
        out.edge[b.edge_by_name(k).with_context(at)?.0] = Some(e.edge_by_name(v).with_context(at)?);
    }
    for (k, v) in &s.faces {
        let at = || format!("{field}.faces.{k}");
        out.face[b.face_by_name(k).with_context(at)?.0] = Some(e.face_by_name(v).with_context(at)?);
    }
    Ok(out)
}

impl InstanceDocument {
    pub fn build(&self) -> Result<Instance> {
        let b = build_complex(&self.complex, "complex")?;
        let cover = match &self.cover {
            CoverDoc::Stars(s) if s == "stars" => cover_to_map(&b, star_cover(&b)).context("cover")?,
            CoverDoc::Stars(s) => bail!("cover: expected \"stars\", pieces or a map, got \"{s}\""),
            CoverDoc::Pieces { pieces } => cover_to_map(&b, build_pieces(&b, pieces)?).context("cover.pieces")?,
            CoverDoc::Map { map, pieces, sections } => {
                let e = build_complex(&map.total, "cover.map.total")?;
                let p = build_map(&b, &e, map)?;
                let pieces = match pieces {
                    Some(ps) => build_pieces(&b, ps)?,
                    None => star_cover(&b),
                };
                let sections = match sections {
                    Some(ss) => {
                        if ss.len() != pieces.len() {
                            bail!("cover.sections: {} sections for {} pieces", ss.len(), pieces.len());
                        }
                        ss.iter()
                            .enumerate()
                            .map(|(i, s)| {
                                if s.piece != pieces[i].name {
                                    bail!("cover.sections[{i}].piece: expected `{}`", pieces[i].name);
                                }
                                build_section(&b, &e, s, &format!("cover.sections[{i}]"))
                            })
                            .collect::<Result<Vec<_>>>()?
                    }
                    None => pieces
                        .iter()
                        .map(|u| find_section(&e, &b, &p, u).ok_or_else(|| anyhow!("cover: no section over `{}`", u.name)))
                        .collect::<Result<Vec<_>>>()?,
                };
                SectionedCover { base: b.clone(), total: e, map: p, pieces, sections }
            }
        };
        let base_set = match &self.base_set {
            BaseSetDoc::One(s) if s == "all" => b.vertex_ids().collect(),
            BaseSetDoc::One(s) => [b.vertex_by_name(s).context("base_set")?].into(),
            BaseSetDoc::Many(vs) => vs
                .iter()
                .enumerate()
                .map(|(i, v)| b.vertex_by_name(v).with_context(|| format!("base_set[{i}]")))
                .collect::<Result<_>>()?,
        };
        Ok(Instance { cover, base_set })
    }

    /// The document describing `cover` and `base_set`. Coproduct covers are
    /// written as pieces, others as a map with explicit sections.
    pub fn describe(name: Option<String>, cover: &SectionedCover, base_set: &BaseSet) -> Self {
        let b = &cover.base;
        let complex = complex_doc(b);
        let pieces: Vec<PieceDoc> = cover.pieces.iter().map(|u| piece_doc(b, u)).collect();
        let coproduct = cover_to_map(b, cover.pieces.clone()).ok();
        let is_coproduct = coproduct.as_ref().is_some_and(|c| {
            c.total == cover.total && c.map == cover.map && c.sections == cover.sections
        });
        let cover_doc = if is_coproduct {
            CoverDoc::Pieces { pieces }
        } else {
            let e = &cover.total;
            let p = &cover.map;
            let names = |pairs: Vec<(String, String)>| pairs.into_iter().collect::<BTreeMap<_, _>>();
            let map = MapDoc {
                total: complex_doc(e),
                vertices: names(e.vertex_ids().map(|v| (e.vertex_name(v).into(), b.vertex_name(p.vertex_map[v.0]).into())).collect()),
                edges: names(e.edge_ids().map(|x| (e.edge(x).name.clone(), b.edge(p.edge_map[x.0]).name.clone())).collect()),
                faces: names(e.face_ids().map(|x| (e.face(x).name.clone(), b.face(p.face_map[x.0]).name.clone())).collect()),
            };
            let sections = cover
                .sections
                .iter()
                .zip(&cover.pieces)
                .map(|(s, u)| SectionDoc {
                    piece: u.name.clone(),
                    vertices: names(section_pairs(&s.vertex, |i| b.vertex_name(VertexId(i)).into(), |v: VertexId| e.vertex_name(v).into())),
                    edges: names(section_pairs(&s.edge, |i| b.edge(EdgeId(i)).name.clone(), |x: EdgeId| e.edge(x).name.clone())),
                    faces: names(section_pairs(&s.face, |i| b.face(FaceId(i)).name.clone(), |x: FaceId| e.face(x).name.clone())),
                })
                .collect();
            CoverDoc::Map { map, pieces: Some(pieces), sections: Some(sections) }
        };
        let base_set = if base_set.len() == b.vertex_count() {
            BaseSetDoc::One("all".into())
        } else {
            BaseSetDoc::Many(base_set.iter().map(|&v| b.vertex_name(v).to_string()).collect())
        };
        InstanceDocument { name, complex, cover: cover_doc, base_set }
    }
}

fn section_pairs<T: Copy>(
    cells: &[Option<T>],
    base: impl Fn(usize) -> String,
    total: impl Fn(T) -> String,
) -> Vec<(String, String)> {
    cells.iter().enumerate().filter_map(|(i, c)| c.map(|x| (base(i), total(x)))).collect()
}

fn complex_doc(c: &Complex2) -> ComplexDoc {
    ComplexDoc {
        vertices: c.vertices().to_vec(),
        edges: c
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                name: e.name.clone(),
                src: c.vertex_name(e.src).into(),
                dst: c.vertex_name(e.dst).into(),
            })
            .collect(),
        faces: c
            .faces()
            .iter()
            .map(|f| FaceDoc {
                name: f.name.clone(),
                start: c.vertex_name(f.boundary.start).into(),
                boundary: f.boundary.steps.iter().map(|&s| c.display_step(s)).collect::<Vec<_>>().join(" "),
            })
            .collect(),
    }
}

/// Lists only the cells not implied by closure.
fn piece_doc(b: &Complex2, u: &Subcomplex) -> PieceDoc {
    let implied = Subcomplex::closure_of(
        b,
        "",
        &[],
        &b.edge_ids().filter(|e| u.edges[e.0]).collect::<Vec<_>>(),
        &b.face_ids().filter(|f| u.faces[f.0]).collect::<Vec<_>>(),
    );
    let on_faces = Subcomplex::closure_of(b, "", &[], &[], &b.face_ids().filter(|f| u.faces[f.0]).collect::<Vec<_>>());
    PieceDoc {
        name: u.name.clone(),
        vertices: b
            .vertex_ids()
            .filter(|v| u.vertices[v.0] && !implied.vertices[v.0])
            .map(|v| b.vertex_name(v).to_string())
            .collect(),
        edges: b
            .edge_ids()
            .filter(|e| u.edges[e.0] && !on_faces.edges[e.0])
            .map(|e| b.edge(e).name.clone())
            .collect(),
        faces: b.face_ids().filter(|f| u.faces[f.0]).map(|f| b.face(f).name.clone()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = r#"{
        "complex": {
            "vertices": ["v0", "v1"],
            "edges": [{"name": "a", "src": "v0", "dst": "v1"}, {"name": "b", "src": "v1", "dst": "v0"}]
        },
        "cover": {"pieces": [{"name": "U1", "edges": ["a"]}, {"name": "U2", "edges": ["b"]}]},
        "base_set": "all"
    }"#;

    #[test]
    fn parses_pieces() {
        let doc = parse(CIRCLE).unwrap();
        let i = doc.build().unwrap();
        assert_eq!((i.cover.total.vertex_count(), i.cover.total.edge_count()), (4, 2));
        assert_eq!(i.base_set.len(), 2);
    }

    #[test]
    fn reports_position_and_field() {
        let err = parse("{\n  \"complex\": 3\n}").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let bad = CIRCLE.replace(r#""dst": "v0""#, r#""dst": "v9""#);
        let err = format!("{:#}", parse(&bad).unwrap().build().unwrap_err());
        assert!(err.contains("complex.edges[1]") && err.contains("v9"), "{err}");
    }

    #[test]
    fn golden_examples_round_trip() {
        let mut all = vec![vkampen::golden::point()];
        all.extend(vkampen::golden::corpus());
        for g in all {
            let doc = InstanceDocument::describe(Some(g.name.into()), &g.cover, &g.base_set);
            let back = parse(&to_json(&doc)).unwrap();
            assert_eq!(back, doc, "{}", g.name);
            let i = back.build().unwrap();
            assert_eq!(i.cover, g.cover, "{}", g.name);
            assert_eq!(i.base_set, g.base_set, "{}", g.name);
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = CIRCLE.replace(r#""base_set": "all""#, r#""base_set": "all", "extra": 1"#);
        assert!(parse(&bad).is_err());
    }
}
