use nlsampling_cli::config::CompandingTag;
use nlsampling_cli::{CliError, Experiment, ExperimentConfig};

const ALL: [Experiment; 6] = [
    Experiment::CompandingTable1,
    Experiment::CompandingTable2,
    Experiment::CompandingNoise,
    Experiment::FriTable3,
    Experiment::FriTable4,
    Experiment::BlindDemo,
];

#[test]
fn presets_are_valid_and_round_trip() {
    for e in ALL {
        let c = ExperimentConfig::preset(e);
        c.validate().unwrap();
        assert_eq!(ExperimentConfig::from_toml(&c.to_toml()).unwrap(), c);
        assert_eq!(Experiment::from_name(e.name()), Some(e));
    }
    assert_eq!(Experiment::from_name("table9"), None);
}

#[test]
fn unknown_keys_are_rejected() {
    let mut text = ExperimentConfig::preset(Experiment::CompandingTable1).to_toml();
    text.push_str("colour = \"blue\"\n");
    assert!(matches!(ExperimentConfig::from_toml(&text), Err(CliError::Config(_))));
}

#[test]
fn missing_keys_are_rejected() {
    let text: String = ExperimentConfig::preset(Experiment::FriTable3)
        .to_toml()
        .lines()
        .filter(|l| !l.starts_with("alpha"))
        .map(|l| format!("{l}\n"))
        .collect();
    assert!(ExperimentConfig::from_toml(&text).is_err());
}

#[test]
fn parses_flat_text() {
    let text = r#"
experiment = "companding_noise"
seed = 7
count = 30
gap_min = 0.06
gap_max = 0.12
companding = "identity"
alpha = 0.25
noise_level = 0.01
perturbation = 0.0
max_iter = 100
out_dir = "x"
"#;
    let c = ExperimentConfig::from_toml(text).unwrap();
    assert_eq!(c.experiment, Experiment::CompandingNoise);
    assert_eq!(c.companding, CompandingTag::Identity);
    assert_eq!(c.seed, 7);
}

#[test]
fn validation_catches_out_of_range_values() {
    let base = ExperimentConfig::preset(Experiment::CompandingTable1);
    let cases = [
        ExperimentConfig { alpha: 0.0, ..base.clone() },
        ExperimentConfig { noise_level: -0.1, ..base.clone() },
        ExperimentConfig { gap_min: 0.2, gap_max: 0.1, ..base.clone() },
        ExperimentConfig { gap_min: 0.01, ..base.clone() },
        ExperimentConfig { count: 2, ..base.clone() },
        ExperimentConfig { count: 90, gap_min: 0.1, ..base.clone() },
        ExperimentConfig { gap_min: 0.1, ..ExperimentConfig::preset(Experiment::FriTable3) },
    ];
    for c in cases {
        assert!(c.validate().is_err(), "{}", c.echo());
    }
}

#[test]
fn mismatched_driver_is_a_config_error() {
    let c = ExperimentConfig::preset(Experiment::FriTable3);
    assert!(matches!(nlsampling_cli::run_table1(&c), Err(CliError::Config(_))));
}
