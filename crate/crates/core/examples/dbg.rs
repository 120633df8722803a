use renyi_thermo::harness::{run_check, TrialConfig};
use renyi_thermo::*;
use rand::Rng;

fn main() {
    let config = TrialConfig::default();
    let report = run_check("pb_inequality", &config).unwrap();
    println!("failures {} worst {:+.6e}", report.failures, report.worst_gap);
    println!("witness: {}", serde_json::to_string_pretty(&report.witness).unwrap());

    // replicate trial manually for the worst index
    let witness = report.witness.unwrap();
    let t = witness["trial"].as_u64().unwrap();
    let mut rng = renyi_thermo::rng::substream(42, "pb_inequality", t);
    let n = config.dims[(t as usize) % config.dims.len()];
    let rho = renyi_thermo::states::ginibre_density(&mut rng, n).unwrap();
    let h = renyi_thermo::states::gue_hermitian(&mut rng, n, 1.0);
    let alphas: Vec<f64> = config.alphas.iter().filter(|a| !a.is_infinite()).map(|a| a.value()).collect();
    let alpha = alphas[(t as usize) % alphas.len()];
    let beta = config.betas[(t as usize) % config.betas.len()];
    println!("trial {t}: n={n} alpha={alpha} beta={beta}");
    let params = ThermoParams::new(AlphaParam::new(alpha).unwrap(), beta).unwrap();
    let log_z = log_partition(&h, beta).unwrap();
    let f = free_energy(&rho, &h, params).unwrap();
    println!("beta*F + logZ = {:+.6e}   (F={f:.6}, logZ={log_z:.6})", beta * f + log_z);
    let eq = gibbs_state(&h, beta).unwrap();
    let f0 = free_energy(&eq, &h, params).unwrap();
    println!("witness gap = {:+.6e}", beta * f0 + log_z);
    let _ = rng.random::<f64>();
}
