use patlas::coclus::{fit, FitParams};
use patlas::report::{ClusterFile, Meta, PipelineConfig};
use patlas::synth::planted_block_matrix;
use patlas::Error;

#[test]
fn config_round_trips_through_toml() {
    let cfg = PipelineConfig {
        input: "x.jsonl".into(),
        g: 9,
        match_threshold: Some(81.5),
        ..PipelineConfig::default()
    };
    let back = PipelineConfig::parse(&cfg.to_toml()).unwrap();
    assert_eq!(back, cfg);
    assert_eq!(back.hash(), cfg.hash());
}

#[test]
fn config_rejects_unknown_keys_and_bad_ranges() {
    assert!(matches!(
        PipelineConfig::parse("input = \"a\"\nclusters = 3\n"),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        PipelineConfig::parse("input = \"a\"\np0 = 50.0\n"),
        Err(Error::Config(_))
    ));
}

#[test]
fn bundled_config_loads_relative_to_its_directory() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/patlas.toml");
    let cfg = PipelineConfig::load(&path).unwrap();
    assert!(cfg.input.is_absolute() || cfg.input.exists());
    assert_eq!(cfg.g, 7);
    assert_eq!(cfg.seed, 42);
}

#[test]
fn cluster_file_round_trips() {
    let p = planted_block_matrix(3, 60, 12, 0.4, 0.02, 1);
    let c = fit(
        &p.matrix,
        &FitParams {
            g: 3,
            ..FitParams::default()
        },
    )
    .unwrap();
    let file = ClusterFile::new(&p.matrix, &c, 0, 10, Meta::new("abc"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clusters.json");
    file.save(&path).unwrap();
    let back = ClusterFile::load(&path).unwrap();
    assert_eq!(back, file);
    assert_eq!(back.rows.len(), 60);
    assert_eq!(back.cols.len(), 12);
}
