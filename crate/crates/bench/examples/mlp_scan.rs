use coolmomentum::objectives::{MlpObjective, SyntheticDataset};
use coolmomentum::optim::{coolmomentum_run, CoolMomentumConfig};
use coolmomentum::thermometry::{epoch_median_rescaled, mann_kendall};

fn scan(layers: &[usize], examples: usize, batch: usize, label_noise: f64, dt_cm: f64, dt_mom: f64) {
    let spe = examples / batch;
    let epochs = 20;
    let steps = spe * epochs;
    let data = SyntheticDataset::<f64>::generate_with_label_noise(
        11, examples, layers[0], *layers.last().unwrap(), label_noise).unwrap();
    let (mut cm_pass, mut mom_pass, mut both) = (0, 0, 0);
    let n_seeds = 10;
    let mut worst_ratios = Vec::new();
    let mut zs = Vec::new();
    for seed in 1..=n_seeds {
        let mut mlp = MlpObjective::new(layers.to_vec(), data.clone(), batch, seed).unwrap();
        let x0 = mlp.init_params(seed ^ 0x9e37_79b9_7f4a_7c15);
        let cm = CoolMomentumConfig::annealed(dt_cm, 0.99, steps).unwrap();
        let log = coolmomentum_run(&mut mlp, &x0, &cm, seed).unwrap();
        let med = epoch_median_rescaled(&log, spe).unwrap();
        let strict = med.windows(2).skip(1).all(|w| w[1] < w[0]);
        let worst = med.windows(2).skip(1).map(|w| w[1] / w[0]).fold(0.0f64, f64::max);
        worst_ratios.push(worst);
        let mom = CoolMomentumConfig::new(dt_mom, 0.9, 1.0, steps).unwrap();
        let log = coolmomentum_run(&mut mlp, &x0, &mom, seed).unwrap();
        let med = epoch_median_rescaled(&log, spe).unwrap();
        let mk = mann_kendall(&med[1..]).unwrap();
        zs.push(mk.z);
        if strict { cm_pass += 1; }
        if mk.no_trend_at_5pct() { mom_pass += 1; }
        if strict && mk.no_trend_at_5pct() { both += 1; }
    }
    let param_count: usize = layers.windows(2).map(|w| w[0]*w[1]+w[1]).sum();
    let wr: Vec<String> = worst_ratios.iter().map(|w| format!("{w:.2}")).collect();
    let zr: Vec<String> = zs.iter().map(|z| format!("{z:+.1}")).collect();
    println!("layers={layers:?} ({param_count}p) ex={examples} B={batch} label={label_noise} dtm={dt_mom} spe={spe}: CM {cm_pass}/10 MOM {mom_pass}/10 both {both}/10");
    println!("   worst ratios: {}   z: {}", wr.join(" "), zr.join(" "));
}

fn main() {
    scan(&[64, 128, 1], 3200, 32, 0.55, 0.1, 0.1);
    scan(&[64, 128, 1], 3200, 32, 0.6, 0.1, 0.1);
    scan(&[64, 128, 1], 3200, 32, 0.65, 0.1, 0.1);
}
