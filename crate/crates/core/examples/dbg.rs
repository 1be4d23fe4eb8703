use daniell_core::improper::*;
fn main() {
    let o = ImproperOptions::with_tol(2e-5);
    let f = |t: f64| if t == 0.0 { 0.0 } else { (t.cos() - (2.0 * t).cos()) / t };
    match laplace_limit_r0(&f, 0.8, 9, &o) {
        Ok(rep) => {
            println!("value={} expected={}", rep.value, 0.5 * 4.0f64.ln());
            println!("trend={:?}", rep.transform_trend);
        }
        Err(e) => println!("err: {}", e),
    }
    // check the transform at fixed r against the closed form 0.5*ln((r^2+4)/(r^2+1))
    for r in [0.8, 0.4, 0.2, 0.1] {
        let l = laplace_transform(&f, r, &o);
        let cf = 0.5 * ((r * r + 4.0) / (r * r + 1.0)).ln();
        println!("r={} transform={:?} closed={}", r, l.map(|v| v), cf);
    }
}
