//! Covering and packing numbers of a finite interval union, with and
//! without restriction to a ball.

use lowdim::metric_cover::{cover_report, doubling_constant, Ball, IntervalUnion};

fn main() -> lowdim::Result<()> {
    let set = IntervalUnion::new(vec![(0.0, 1.0 / 3.0), (2.0 / 3.0, 1.0)])?;
    for r in [0.5, 1.0 / 3.0, 0.1, 0.01] {
        let rep = cover_report(&set, None, r);
        println!("r = {r:<8.4} N_r = {:<4} M_r = {:<4} M_4r = {:<4} sandwich ok: {}", rep.n_cover, rep.m_pack, rep.m_pack_4r, rep.sandwich_ok());
    }
    let ball = Ball::new(0.7, 0.2)?;
    let rep = cover_report(&set, Some(ball), 0.05);
    println!("inside B(0.7, 0.2) at r = 0.05: N_r = {}, M_r = {}", rep.n_cover, rep.m_pack);
    println!("doubling constant of [0, 1]: {}", doubling_constant(&IntervalUnion::new(vec![(0.0, 1.0)])?, &[0.5, 0.1, 0.01])?);
    Ok(())
}
