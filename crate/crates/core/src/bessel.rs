//! Integer-order Bessel functions of the first kind.
//!
//! Values come from Miller's backward recurrence normalized with
//! `J_0 + 2 (J_2 + J_4 + ...) = 1`. The recurrence is started well above
//! both the requested order and the argument so the seed error has decayed
//! below double precision by the time it reaches the orders returned.

/// Returns `J_0(x) ..= J_max_order(x)`.
pub fn bessel_j_table(max_order: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; max_order + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    // Past order ~ax the functions decay super-exponentially.
    let start = {
        let base = max_order.max(ax.ceil() as usize);
        let m = base + 40 + (ax.sqrt() * 12.0) as usize;
        m + (m % 2)
    };

    let mut upper = 0.0_f64; // J_{k+1}
    let mut current = 1e-300_f64; // J_k
    let mut norm = 0.0_f64;
    for k in (1..=start).rev() {
        let lower = 2.0 * k as f64 / ax * current - upper;
        upper = current;
        current = lower;
        // `current` now holds J_{k-1}.
        let order = k - 1;
        if order <= max_order {
            out[order] = current;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * current;
        }
        if current.abs() > 1e250 {
            let s = 1e-250;
            current *= s;
            upper *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    norm += current;
    for v in out.iter_mut() {
        *v /= norm;
    }
    if x < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// `J_n(x)` for any integer order, using `J_{-n} = (-1)^n J_n`.
pub fn bessel_j(order: i64, x: f64) -> f64 {
    let n = order.unsigned_abs() as usize;
    let v = bessel_j_table(n, x)[n];
    if order < 0 && n % 2 == 1 {
        -v
    } else {
        v
    }
}
