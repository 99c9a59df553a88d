use g4split::igusa::SigmaAction;
use g4split::locus::*;
use g4split::Error;

fn small(seed: u64) -> SurveyConfig {
    SurveyConfig { p: 10007, n: 60, seed, batch: 16, ..Default::default() }
}

#[test]
fn samples_are_sound() {
    for s in ["(0,1)(2,3)", "(0,1,2)", "(0,1,2,3,4,5)"] {
        let sigma = SigmaAction::parse(s).unwrap();
        let set = sample_locus(&sigma, &small(1)).unwrap();
        assert_eq!(set.samples.len(), 60);
        for x in &set.samples {
            assert!(verify_sample(&sigma, 10007, x).unwrap());
        }
        let mut sorted: Vec<_> = set.samples.iter().map(|x| x.point.clone()).collect();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 60);
    }
}

#[test]
fn tampered_sample_fails_verification() {
    let sigma = SigmaAction::parse("(0,1,2)").unwrap();
    let set = sample_locus(&sigma, &small(3)).unwrap();
    let mut x = set.samples[0].clone();
    x.implication = !x.implication;
    assert!(!verify_sample(&sigma, 10007, &x).unwrap());
    let mut y = set.samples[0].clone();
    y.point[1] = (y.point[1] + 1) % 10007;
    assert!(!verify_sample(&sigma, 10007, &y).unwrap());
}

#[test]
fn sequential_matches_parallel() {
    let sigmas = class_representatives();
    let a = implication_survey(&sigmas[..5], &small(9)).unwrap();
    let b = implication_survey(&sigmas[..5], &SurveyConfig { sequential: true, batch: 5, ..small(9) }).unwrap();
    assert_eq!(a, b);
}

#[cfg(feature = "parallel")]
#[test]
fn independent_of_worker_count() {
    let sigmas = class_representatives();
    let run = |k: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .unwrap()
            .install(|| implication_survey(&sigmas, &small(5)).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn seeds_change_samples() {
    let sigma = SigmaAction::parse("(0,1,2,3)").unwrap();
    let a = sample_locus(&sigma, &small(1)).unwrap();
    let b = sample_locus(&sigma, &small(2)).unwrap();
    assert_ne!(a.samples, b.samples);
}

#[test]
fn class_attribution() {
    let report = implication_survey(&class_representatives(), &SurveyConfig { n: 150, ..Default::default() }).unwrap();
    for row in &report.rows {
        let t = row.sigma.cycle_type();
        match t.as_slice() {
            [1, 1, 1, 1, 1, 1] | [2, 1, 1, 1, 1] | [2, 2, 2] => {
                assert_eq!(row.degenerate, row.samples, "{}", row.sigma);
                assert_eq!(row.rate_string(), "n/a");
            }
            [2, 2, 1, 1] => assert!(row.rate_at_least(1, 1) && row.nondegenerate > 0),
            _ => assert!(!row.rate_at_least(1, 10), "{} rate {}", row.sigma, row.rate_string()),
        }
    }
    let attributed: Vec<String> = report.attributed().iter().map(|s| s.to_string()).collect();
    assert_eq!(attributed, vec!["(0,1)(2,3)".to_string()]);
    let j = report.to_json(false);
    assert_eq!(j["rows"].as_array().unwrap().len(), 11);
}

#[test]
fn conjugate_sigma_gives_same_picture() {
    let sigma = SigmaAction::parse("(2,5)(1,4)").unwrap();
    let row = &implication_survey(&[sigma], &small(11)).unwrap().rows[0];
    assert!(row.rate_at_least(1, 1));
}

#[test]
fn sampling_failure_and_bad_input() {
    let sigma = SigmaAction::parse("(0,1,2,3,4)").unwrap();
    let mut failures = 0;
    for seed in 0..40 {
        let cfg = SurveyConfig { n: 1, seed, max_planes: 1, batch: 1, ..Default::default() };
        match sample_locus(&sigma, &cfg) {
            Ok(s) => assert_eq!(s.planes, 1),
            Err(Error::SamplingFailed { planes }) => {
                assert_eq!(planes, 1);
                failures += 1;
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(failures > 0);
    assert!(matches!(sample_locus(&sigma, &SurveyConfig { p: 10005, ..small(1) }), Err(Error::InvalidPrime(_))));
    assert!(sample_locus(&sigma, &SurveyConfig { n: 0, ..small(1) }).is_err());
}
