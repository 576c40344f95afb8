//! Distinguishability from polarization rotations inside the cavities.

use cavitywalk::cavity::{jones_rotation, polarization_walk, NetworkConfig};

fn main() -> cavitywalk::Result<()> {
    let steps = 40;
    println!("angle (rad)   ‖[J₁,J₂]‖   F(N=10)   F(N=40)");
    for angle in [0.0, 0.05, 0.1, 0.2, 0.4, 0.8] {
        let mut cfg = NetworkConfig::apparatus(0.5)?;
        cfg.cavities[0].jones = Some(jones_rotation([1.0, 0.0, 0.0], angle)?);
        cfg.cavities[1].jones = Some(jones_rotation([0.0, 1.0, 0.0], angle)?);
        let walk = polarization_walk(&cfg, steps)?;
        println!(
            "{angle:>11} {:>11.4} {:>9.5} {:>9.5}",
            walk.commutator_norm,
            walk.steps[9].visibility,
            walk.steps.last().unwrap().visibility
        );
    }

    let mut cfg = NetworkConfig::apparatus(0.5)?;
    cfg.cavities[0].jones = Some(jones_rotation([0.0, 0.0, 1.0], 0.7)?);
    cfg.cavities[1].jones = Some(jones_rotation([0.0, 0.0, 1.0], 1.9)?);
    let walk = polarization_walk(&cfg, steps)?;
    println!(
        "\ncommuting rotations: ‖[J₁,J₂]‖ = {:.1e}, F(N=40) = {:.15}",
        walk.commutator_norm,
        walk.steps.last().unwrap().visibility
    );
    Ok(())
}
