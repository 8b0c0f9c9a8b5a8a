//! TSPLIB geographical distance.

// TSPLIB fixes this truncated value; exact PI changes GEO distances.
#[allow(clippy::approx_constant)]
const PI: f64 = 3.141592;
const EARTH_RADIUS: f64 = 6378.388;

/// Converts a `DDD.MM` value (degrees, then minutes as decimal digits)
/// to radians. Degrees are truncated toward zero.
fn to_radians(value: f64) -> f64 {
    let deg = value.trunc();
    let min = value - deg;
    PI * (deg + 5.0 * min / 3.0) / 180.0
}

/// Great-circle distance between two `(latitude, longitude)` points in
/// TSPLIB `DDD.MM` notation, truncated to an integer number of kilometres.
pub fn geo_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (lat_a, lon_a) = (to_radians(a.0), to_radians(a.1));
    let (lat_b, lon_b) = (to_radians(b.0), to_radians(b.1));
    let q1 = (lon_a - lon_b).cos();
    let q2 = (lat_a - lat_b).cos();
    let q3 = (lat_a + lat_b).cos();
    let arg = (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).clamp(-1.0, 1.0);
    (EARTH_RADIUS * arg.acos() + 1.0).trunc()
}
