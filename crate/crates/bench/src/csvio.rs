//! CSV formatting shared by the run and summarize paths.
//!
//! Floats are written with 17 significant digits (`{:.16e}`) so every f64
//! round-trips losslessly through the files.

/// Lossless f64 cell.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub const STEP_HEADER: &str = "step,rho,lr,loss,dx_sq_norm";
pub const EPOCH_HEADER: &str = "epoch,mean_loss,final_loss,pr_loss,temperature,rescaled_temperature";
pub const PARAMS_HEADER: &str = "index,final,averaged";
pub const SUMMARY_HEADER: &str =
    "seed,status,final_loss,pr_loss,temperature,rescaled_temperature,in_global_basin,averaged_in_global_basin";

/// Split one CSV line and parse a float cell, with row context on errors.
pub fn parse_float(cell: &str, file: &str, row: usize) -> anyhow::Result<f64> {
    cell.parse::<f64>()
        .map_err(|_| anyhow::anyhow!("{file}: row {row}: bad float {cell:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_cells_round_trip() {
        for v in [0.00995, -1.0363187, 2.0_f64.sqrt(), 1e-300, 0.0] {
            let cell = fmt_float(v);
            let back: f64 = cell.parse().unwrap();
            assert_eq!(v, back, "{cell}");
        }
    }
}
