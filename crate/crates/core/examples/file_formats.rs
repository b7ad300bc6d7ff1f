//! Instance documents, provenance, and the witness sidecars.
//!
//! ```bash
//! cargo run --example file_formats
//! ```

use levelplan::gen::{generate, Bias, GeneratorConfig, Generated, Kind};
use levelplan::io::{
    canonicalize, parse_document, parse_ordering, parse_witness, serialize_document, serialize_ordering,
    serialize_witness, Document, Instance,
};
use levelplan::oracles::{solve_sefe_exhaustive, solve_tlp_exhaustive, Budget};
use levelplan::reductions::reduce_tlp_to_sefe;
use levelplan::Error;

fn main() -> levelplan::Result<()> {
    // keys in any order, vertices unsorted: canonical form fixes both
    let messy = r#"{"vertices":[{"level":1,"id":"b"},{"id":"a","level":0}],"kind":"level","edges":[["a","b"]]}"#;
    let doc = parse_document(messy)?;
    print!("canonical level document:\n{}", serialize_document(&canonicalize(&doc)?)?);

    match parse_document(r#"{"kind":"cl","vertices":[{"id":"a"}]}"#) {
        Err(Error::Schema(problems)) => {
            println!("schema errors:");
            for p in problems {
                println!("  {p}");
            }
        }
        other => println!("unexpected: {other:?}"),
    }
    if let Err(e) = parse_document("{\"kind\": \"level\",\n \"vertices\": [1,]}") {
        println!("{e}");
    }

    let cfg = GeneratorConfig {
        seed: 7,
        kind: Kind::ProperTLevel,
        k: 2,
        width: 2,
        bias: Bias::ForceSat,
        ..GeneratorConfig::default()
    };
    let Generated::Instance(Instance::TLevel(t)) = generate(&cfg)? else {
        unreachable!()
    };
    let budget = Budget::default();

    let o = solve_tlp_exhaustive(&t, &budget)?.expect("generated around a witness");
    let text = serialize_ordering(&o)?;
    print!("ordering sidecar:\n{text}");
    assert_eq!(parse_ordering(&text)?, o);

    // the reduction's document carries its provenance along
    let (s, prov) = reduce_tlp_to_sefe(&t)?;
    let doc = Document::with_provenance(Instance::Sefe(s.clone()), prov);
    let text = serialize_document(&doc)?;
    // vertices come back in id order, so compare canonical forms
    let back = parse_document(&text)?;
    assert_eq!(back, canonicalize(&doc)?);
    println!(
        "embedding instance: {} bytes, {} provenance roles kept",
        text.len(),
        back.provenance.map_or(0, |p| p.roles.len())
    );

    if let Some(w) = solve_sefe_exhaustive(&s, &budget)? {
        let text = serialize_witness(&s, &w)?;
        let back = parse_witness(&s, &text)?;
        println!("rotation sidecar: {} bytes, round trip {}", text.len(), back == w);
    }
    Ok(())
}
