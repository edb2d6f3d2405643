//! Stabilizes a synthetic sequence with alternating horizontal jitter.

use swarm_landing::perception::stabilize;
use swarm_landing::perception::synthetic::{alternating_jitter, shifted_sequence, Texture};

fn main() -> swarm_landing::Result<()> {
    let texture = Texture::random(1, 64, 64);
    let frames = shifted_sequence(&texture, 64, 64, &alternating_jitter(10, 2.0));
    let out = stabilize(&frames)?;
    println!("{:>4} {:>8} {:>8} {:>8}", "pair", "dx", "smooth", "warp dx");
    for (k, (m, s)) in out.motion.iter().zip(&out.smoothed).enumerate() {
        println!("{k:>4} {:>8.3} {:>8.3} {:>8.3}", m.dx, s.dx, out.compensation[k + 1].dx);
    }
    println!("residual jitter {:.3} px (input motion 4 px per frame)", out.residual_jitter);
    Ok(())
}
