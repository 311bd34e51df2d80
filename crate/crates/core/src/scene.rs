//! Geometry, planar array layouts, line-of-sight channels and link-budget
//! arithmetic.
//!
//! Angles follow the wave-vector convention used throughout the crate: azimuth
//! `φ` is measured in the local xy-plane from the local x axis (the array
//! broadside), elevation `θ` from that plane towards local +z, so
//!
//! ```text
//! k(φ, θ) = 2π/λ · [cos θ cos φ, cos θ sin φ, sin θ]
//! ```
//!
//! Arrays lie in the local yz-plane. Global scene coordinates are mapped into
//! that frame by an [`Orientation`].

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{invalid, Result};
use crate::{Complex, Real};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn from_f64(x: f64, y: f64, z: f64) -> Self {
        Self::new(T::lit(x), T::lit(y), T::lit(z))
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, o: &Self) -> T {
        (*self - *o).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero() && n.is_finite()).then(|| *self * (T::one() / n))
    }

    /// Unit direction `(cos θ cos φ, cos θ sin φ, sin θ)`.
    pub fn from_angles(azimuth: T, elevation: T) -> Self {
        Self::new(
            elevation.cos() * azimuth.cos(),
            elevation.cos() * azimuth.sin(),
            elevation.sin(),
        )
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Rotation from an array's local frame into the global frame, stored as the
/// three local axes expressed in global coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orientation<T> {
    axes: [Vec3<T>; 3],
}

impl<T: Real> Orientation<T> {
    pub fn identity() -> Self {
        Self {
            axes: [
                Vec3::from_f64(1.0, 0.0, 0.0),
                Vec3::from_f64(0.0, 1.0, 0.0),
                Vec3::from_f64(0.0, 0.0, 1.0),
            ],
        }
    }

    /// Vertical surface whose broadside points along global −y, with local y
    /// along global +x and local z along global +z.
    pub fn broadside_neg_y() -> Self {
        Self {
            axes: [
                Vec3::from_f64(0.0, -1.0, 0.0),
                Vec3::from_f64(1.0, 0.0, 0.0),
                Vec3::from_f64(0.0, 0.0, 1.0),
            ],
        }
    }

    /// Frame with the given broadside; local y is the horizontal direction
    /// `up × broadside` and local z completes a right-handed frame.
    pub fn facing(broadside: Vec3<T>) -> Result<Self> {
        let x = broadside
            .normalized()
            .ok_or_else(|| crate::Error::InvalidArgument("zero broadside".into()))?;
        let up = Vec3::from_f64(0.0, 0.0, 1.0);
        let horizontal = up.cross(&x);
        if horizontal.norm() <= T::lit(1e-9) {
            return invalid("broadside must not be vertical");
        }
        let y = horizontal * (T::one() / horizontal.norm());
        let z = x.cross(&y);
        Ok(Self { axes: [x, y, z] })
    }

    /// Rotation from explicit local axes; they must be orthonormal and
    /// right-handed.
    pub fn from_axes(x: Vec3<T>, y: Vec3<T>, z: Vec3<T>) -> Result<Self> {
        let tol = T::lit(1e-9);
        let unit = |v: &Vec3<T>| (v.norm() - T::one()).abs() <= tol;
        if !(unit(&x) && unit(&y) && unit(&z)) {
            return invalid("orientation axes must be unit vectors");
        }
        if x.dot(&y).abs() > tol || x.dot(&z).abs() > tol || y.dot(&z).abs() > tol {
            return invalid("orientation axes must be orthogonal");
        }
        if (x.cross(&y) - z).norm() > tol {
            return invalid("orientation axes must be right-handed");
        }
        Ok(Self { axes: [x, y, z] })
    }

    pub fn axes(&self) -> [Vec3<T>; 3] {
        self.axes
    }

    pub fn to_local(&self, global: Vec3<T>) -> Vec3<T> {
        Vec3::new(
            self.axes[0].dot(&global),
            self.axes[1].dot(&global),
            self.axes[2].dot(&global),
        )
    }

    pub fn to_global(&self, local: Vec3<T>) -> Vec3<T> {
        self.axes[0] * local.x + self.axes[1] * local.y + self.axes[2] * local.z
    }
}

impl<T: Real> Default for Orientation<T> {
    fn default() -> Self {
        Self::broadside_neg_y()
    }
}

/// Rectangular half-wavelength grid in the local yz-plane, centred on the
/// local origin. Rows run along local z, columns along local y, and element
/// `n = r·cols + c` is indexed row-by-row.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayLayout<T> {
    pub element_positions: Vec<Vec3<T>>,
    pub rows: usize,
    pub cols: usize,
    pub spacing: T,
    pub orientation: Orientation<T>,
}

impl<T: Real> ArrayLayout<T> {
    pub fn len(&self) -> usize {
        self.element_positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.element_positions.is_empty()
    }

    pub fn with_orientation(mut self, orientation: Orientation<T>) -> Self {
        self.orientation = orientation;
        self
    }
}

/// Near-square factorisation `rows × cols = n` with `rows ≤ cols`.
pub fn grid_shape(n: usize) -> (usize, usize) {
    let mut rows = 1;
    let mut r = 1;
    while r * r <= n {
        if n.is_multiple_of(r) {
            rows = r;
        }
        r += 1;
    }
    (rows, n / rows)
}

pub fn make_layout<T: Real>(
    n: usize,
    wavelength: T,
    rows_override: Option<usize>,
) -> Result<ArrayLayout<T>> {
    if n == 0 {
        return invalid("array needs at least one element");
    }
    if !(wavelength > T::zero()) {
        return invalid("wavelength must be positive");
    }
    let (rows, cols) = match rows_override {
        Some(0) => return invalid("rows override must be positive"),
        Some(r) if !n.is_multiple_of(r) => {
            return invalid(format!("rows override {r} does not divide {n}"));
        }
        Some(r) => (r, n / r),
        None => grid_shape(n),
    };
    let spacing = wavelength * T::lit(0.5);
    let half = T::lit(0.5);
    // Centroid of (k - ½)·d for k = 1..=count is (count/2)·d.
    let centre_r = T::from_usize_lossy(rows) * half * spacing;
    let centre_c = T::from_usize_lossy(cols) * half * spacing;
    let mut element_positions = Vec::with_capacity(n);
    for r in 1..=rows {
        for c in 1..=cols {
            let z = (T::from_usize_lossy(r) - half) * spacing - centre_r;
            let y = (T::from_usize_lossy(c) - half) * spacing - centre_c;
            element_positions.push(Vec3::new(T::zero(), y, z));
        }
    }
    Ok(ArrayLayout {
        element_positions,
        rows,
        cols,
        spacing,
        orientation: Orientation::default(),
    })
}

/// Error on a non-positive or non-finite wavelength.
pub fn wave_vector<T: Real>(azimuth: T, elevation: T, wavelength: T) -> Result<Vec3<T>> {
    if !(wavelength > T::zero()) || !wavelength.is_finite() {
        return invalid("wavelength must be positive and finite");
    }
    let k = T::TAU() / wavelength;
    Ok(Vec3::from_angles(azimuth, elevation) * k)
}

/// Azimuth/elevation of `to` seen from `from`, in the local frame of
/// `orientation`. At the poles the azimuth is reported as 0.
pub fn angles_between<T: Real>(
    from: Vec3<T>,
    to: Vec3<T>,
    orientation: &Orientation<T>,
) -> Result<(T, T)> {
    let dir = match (to - from).normalized() {
        Some(d) => orientation.to_local(d),
        None => return invalid("angles between coincident points are undefined"),
    };
    let horizontal = (dir.x * dir.x + dir.y * dir.y).sqrt();
    let elevation = dir.z.atan2(horizontal);
    if horizontal <= T::lit(1e-12) {
        return Ok((T::zero(), elevation));
    }
    let mut azimuth = dir.y.atan2(dir.x);
    if azimuth <= -T::PI() {
        azimuth = T::PI();
    }
    Ok((azimuth, elevation))
}

/// Single-path far-field channel towards/from direction `(φ, θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LosChannel<T> {
    pub gain: T,
    pub azimuth: T,
    pub elevation: T,
    pub coefficients: Vec<Complex<T>>,
}

impl<T: Real> LosChannel<T> {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// `[h]_n = √β · exp(j k(φ,θ)ᵀ u_n)`. The wavelength is recovered from the
/// layout spacing (λ/2).
pub fn los_channel<T: Real>(
    gain: T,
    azimuth: T,
    elevation: T,
    layout: &ArrayLayout<T>,
) -> Result<LosChannel<T>> {
    if !(gain >= T::zero()) || !gain.is_finite() {
        return invalid("channel gain must be finite and non-negative");
    }
    let k = wave_vector(azimuth, elevation, layout.spacing * T::lit(2.0))?;
    let amp = gain.sqrt();
    let coefficients = layout
        .element_positions
        .iter()
        .map(|u| Complex::from_polar(amp, k.dot(u)))
        .collect();
    Ok(LosChannel {
        gain,
        azimuth,
        elevation,
        coefficients,
    })
}

/// Channel from a global position to an array (or back; LoS reciprocity).
pub fn los_channel_between<T: Real>(
    gain: T,
    array_pos: Vec3<T>,
    terminal_pos: Vec3<T>,
    layout: &ArrayLayout<T>,
) -> Result<LosChannel<T>> {
    let (az, el) = angles_between(array_pos, terminal_pos, &layout.orientation)?;
    los_channel(gain, az, el, layout)
}

/// Log-distance UMi line-of-sight model `PL = slope·log₁₀(d) + intercept +
/// freq_coeff·log₁₀(f_GHz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UmiPathLoss<T> {
    pub slope: T,
    pub intercept: T,
    pub freq_coeff: T,
    pub min_distance: T,
}

impl<T: Real> Default for UmiPathLoss<T> {
    fn default() -> Self {
        Self {
            slope: T::lit(22.0),
            intercept: T::lit(28.0),
            freq_coeff: T::lit(20.0),
            min_distance: T::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget<T> {
    pub carrier_ghz: T,
    pub wavelength: T,
    pub bandwidth_hz: T,
    /// Thermal noise power σ² in watts.
    pub noise_power: T,
    /// Antenna gain on the IRS/relay side.
    pub node_gain_dbi: T,
    /// Antenna gain at source and destination.
    pub endpoint_gain_dbi: T,
    pub pathloss: UmiPathLoss<T>,
}

impl<T: Real> LinkBudget<T> {
    pub fn new(
        carrier_ghz: T,
        bandwidth_hz: T,
        noise_dbm: T,
        node_gain_dbi: T,
        endpoint_gain_dbi: T,
    ) -> Result<Self> {
        if !(carrier_ghz > T::zero()) {
            return invalid("carrier frequency must be positive");
        }
        if !(bandwidth_hz > T::zero()) {
            return invalid("bandwidth must be positive");
        }
        let noise_power = dbm_to_watt(noise_dbm);
        if !(noise_power > T::zero()) || !noise_power.is_finite() {
            return invalid("noise power must be positive and finite");
        }
        Ok(Self {
            carrier_ghz,
            wavelength: T::lit(SPEED_OF_LIGHT) / (carrier_ghz * T::lit(1e9)),
            bandwidth_hz,
            noise_power,
            node_gain_dbi,
            endpoint_gain_dbi,
            pathloss: UmiPathLoss::default(),
        })
    }

    /// 3 GHz carrier, 10 MHz, −94 dBm noise, 5 dBi node and 0 dBi terminals.
    pub fn reference() -> Self {
        Self::new(
            T::lit(3.0),
            T::lit(10e6),
            T::lit(-94.0),
            T::lit(5.0),
            T::zero(),
        )
        .expect("reference budget is valid")
    }
}

/// Linear channel gain of one hop between the node and a terminal, antenna
/// gains included.
pub fn pathloss_umi<T: Real>(distance: T, budget: &LinkBudget<T>) -> Result<T> {
    let pl = &budget.pathloss;
    if !(distance >= pl.min_distance) || !distance.is_finite() {
        return invalid(format!(
            "distance {distance} m below UMi validity ({} m)",
            pl.min_distance
        ));
    }
    let pl_db =
        pl.slope * distance.log10() + pl.intercept + pl.freq_coeff * budget.carrier_ghz.log10();
    Ok(db_to_linear(
        -(pl_db - budget.node_gain_dbi - budget.endpoint_gain_dbi),
    ))
}

pub fn db_to_linear<T: Real>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

pub fn linear_to_db<T: Real>(ratio: T) -> T {
    T::lit(10.0) * ratio.log10()
}

pub fn dbm_to_watt<T: Real>(dbm: T) -> T {
    db_to_linear(dbm - T::lit(30.0))
}

pub fn watt_to_dbm<T: Real>(watt: T) -> T {
    linear_to_db(watt) + T::lit(30.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

    #[test]
    fn wave_vector_examples() {
        let k = wave_vector(0.0, 0.0, 0.1).unwrap();
        assert_relative_eq!(k.x, 62.83185307179586, epsilon = 1e-12);
        assert_eq!((k.y, k.z), (0.0, 0.0));

        let k = wave_vector(FRAC_PI_2, 0.0, 0.1).unwrap();
        assert!(k.x.abs() < 1e-12);
        assert_relative_eq!(k.y, 62.83185307179586, epsilon = 1e-12);

        let k = wave_vector(FRAC_PI_4, FRAC_PI_6, 0.1).unwrap();
        let s = 2.0 * PI / 0.1;
        assert_relative_eq!(k.x, s * FRAC_PI_6.cos() * FRAC_PI_4.cos(), epsilon = 1e-12);
        assert_relative_eq!(k.y, s * FRAC_PI_6.cos() * FRAC_PI_4.sin(), epsilon = 1e-12);
        assert_relative_eq!(k.z, s * 0.5, epsilon = 1e-12);
    }

    #[test]
    fn wave_vector_rejects_bad_wavelength() {
        assert!(wave_vector(0.0, 0.0, 0.0).is_err());
        assert!(wave_vector(0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn layout_shapes() {
        let l = make_layout(100, 0.1, None).unwrap();
        assert_eq!((l.rows, l.cols), (10, 10));
        let l = make_layout(75, 0.1, None).unwrap();
        assert_eq!((l.rows, l.cols), (5, 15));
        let l = make_layout(50, 0.1, None).unwrap();
        assert_eq!((l.rows, l.cols), (5, 10));
        let l = make_layout(1, 0.1, None).unwrap();
        assert_eq!(l.element_positions, vec![Vec3::zero()]);
        let l = make_layout(75, 0.1, Some(3)).unwrap();
        assert_eq!((l.rows, l.cols), (3, 25));
    }

    #[test]
    fn layout_errors() {
        assert!(make_layout::<f64>(0, 0.1, None).is_err());
        assert!(make_layout::<f64>(75, 0.1, Some(4)).is_err());
        assert!(make_layout::<f64>(4, 0.0, None).is_err());
    }

    #[test]
    fn layout_is_centred_half_wavelength_grid() {
        let l = make_layout(6, 0.1, None).unwrap();
        assert_eq!((l.rows, l.cols), (2, 3));
        let sum = l
            .element_positions
            .iter()
            .fold(Vec3::zero(), |acc, &p| acc + p);
        assert!(sum.norm() < 1e-15);
        // Row-by-row: element 1 is the column neighbour of element 0.
        let d01 = l.element_positions[0].distance(&l.element_positions[1]);
        let d03 = l.element_positions[0].distance(&l.element_positions[3]);
        assert_relative_eq!(d01, 0.05, epsilon = 1e-15);
        assert_relative_eq!(d03, 0.05, epsilon = 1e-15);
        assert!((l.element_positions[1].y - l.element_positions[0].y) > 0.0);
        assert!((l.element_positions[3].z - l.element_positions[0].z) > 0.0);
    }

    #[test]
    fn angles_examples() {
        let id = Orientation::identity();
        let (az, el) = angles_between(Vec3::zero(), Vec3::from_f64(1.0, 0.0, 0.0), &id).unwrap();
        assert_eq!((az, el), (0.0, 0.0));

        let (az, el) = angles_between(Vec3::zero(), Vec3::from_f64(0.0, 0.0, 1.0), &id).unwrap();
        assert_eq!(az, 0.0);
        assert_relative_eq!(el, FRAC_PI_2);

        let o = Orientation::<f64>::broadside_neg_y();
        let from = Vec3::from_f64(60.0, 10.0, 0.0);
        let to = Vec3::zero();
        let (az, el) = angles_between(from, to, &o).unwrap();
        let rebuilt = o.to_global(Vec3::from_angles(az, el));
        let want = (to - from).normalized().unwrap();
        assert!((rebuilt - want).norm() < 1e-12);
    }

    #[test]
    fn angles_reject_coincident_points() {
        let p = Vec3::<f64>::from_f64(1.0, 2.0, 3.0);
        assert!(angles_between(p, p, &Orientation::identity()).is_err());
    }

    #[test]
    fn azimuth_range_is_half_open() {
        let id = Orientation::<f64>::identity();
        let (az, _) = angles_between(Vec3::zero(), Vec3::from_f64(-1.0, -0.0, 0.0), &id).unwrap();
        assert_eq!(az, PI);
    }

    #[test]
    fn los_channel_examples() {
        let l1 = make_layout(1, 0.1, None).unwrap();
        let h = los_channel(4.0, 0.3, -0.2, &l1).unwrap();
        assert_eq!(h.coefficients, vec![Complex::new(2.0, 0.0)]);

        let l2 = ArrayLayout {
            element_positions: vec![Vec3::zero(), Vec3::from_f64(0.0, 0.05, 0.0)],
            rows: 1,
            cols: 2,
            spacing: 0.05,
            orientation: Orientation::identity(),
        };
        let h = los_channel(1.0, FRAC_PI_2, 0.0, &l2).unwrap();
        assert_relative_eq!(h.coefficients[0].arg(), 0.0);
        assert_relative_eq!(h.coefficients[1].arg().abs(), PI, epsilon = 1e-12);

        assert!(los_channel(-1.0, 0.0, 0.0, &l1).is_err());
    }

    #[test]
    fn pathloss_examples() {
        let b = LinkBudget::<f64>::reference();
        let beta = pathloss_umi(60.0, &b).unwrap();
        let pl = 22.0 * 60f64.log10() + 28.0 + 20.0 * 3f64.log10();
        assert_relative_eq!(pl, 76.66, epsilon = 5e-3);
        assert_relative_eq!(beta, 10f64.powf(-(pl - 5.0) / 10.0), max_relative = 1e-12);
        assert_relative_eq!(beta, 6.82e-8, max_relative = 5e-3);

        let ratio = pathloss_umi(100.0, &b).unwrap() / pathloss_umi(10.0, &b).unwrap();
        assert_relative_eq!(linear_to_db(ratio), -22.0, epsilon = 1e-10);

        let flat = LinkBudget::new(1.0, 1e6, -94.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(
            linear_to_db(pathloss_umi(1.0, &flat).unwrap()),
            -28.0,
            epsilon = 1e-12
        );

        assert!(pathloss_umi(0.5, &b).is_err());
    }

    #[test]
    fn unit_conversions() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert_relative_eq!(
            dbm_to_watt(-94.0),
            3.981_071_705_534_97e-13,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            db_to_linear(25.0),
            316.227_766_016_837_9,
            max_relative = 1e-12
        );
    }

    #[test]
    fn reference_wavelength() {
        let b = LinkBudget::<f64>::reference();
        assert_relative_eq!(b.wavelength, SPEED_OF_LIGHT / 3e9);
        assert!((b.wavelength - 0.1).abs() < 1e-3);
    }

    #[test]
    fn facing_builds_right_handed_frame() {
        let o = Orientation::facing(Vec3::<f64>::from_f64(0.0, -1.0, 0.0)).unwrap();
        assert_eq!(o, Orientation::broadside_neg_y());
        let [x, y, z] = o.axes();
        assert!(Orientation::from_axes(x, y, z).is_ok());
        assert!(Orientation::from_axes(x, z, y).is_err());
        assert!(Orientation::facing(Vec3::<f64>::from_f64(0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let l = make_layout::<f32>(4, 0.1, None).unwrap();
        let h = los_channel(0.25f32, 0.4, 0.1, &l).unwrap();
        for c in &h.coefficients {
            assert!((c.norm() - 0.5).abs() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn wave_vector_norm(az in -PI..PI, el in -FRAC_PI_2..FRAC_PI_2, lambda in 0.01f64..10.0) {
            let k = wave_vector(az, el, lambda).unwrap();
            prop_assert!((k.norm() - 2.0 * PI / lambda).abs() <= 1e-12 * (2.0 * PI / lambda));
        }

        #[test]
        fn angles_round_trip(
            x in -100.0f64..100.0, y in -100.0f64..100.0, z in -100.0f64..100.0,
            bx in -1.0f64..1.0, by in -1.0f64..1.0,
        ) {
            let to = Vec3::new(x, y, z);
            prop_assume!(to.norm() > 1e-3);
            prop_assume!((x * x + y * y).sqrt() > 1e-3 * to.norm());
            prop_assume!((bx * bx + by * by).sqrt() > 1e-3);
            let o = Orientation::facing(Vec3::new(bx, by, 0.0)).unwrap();
            let (az, el) = angles_between(Vec3::zero(), to, &o).unwrap();
            prop_assert!(az > -PI && az <= PI);
            prop_assert!(el.abs() <= FRAC_PI_2);
            let back = o.to_global(Vec3::from_angles(az, el));
            prop_assert!((back - to.normalized().unwrap()).norm() < 1e-10);
        }

        #[test]
        fn los_coefficients_have_modulus_sqrt_beta(
            beta in 0.0f64..10.0, az in -PI..PI, el in -1.5f64..1.5, n in 1usize..40,
        ) {
            let l = make_layout(n, 0.1, None).unwrap();
            let h = los_channel(beta, az, el, &l).unwrap();
            for c in &h.coefficients {
                prop_assert!((c.norm() - beta.sqrt()).abs() <= 1e-12 * (1.0 + beta.sqrt()));
            }
            let total: f64 = h.coefficients.iter().map(|c| c.norm_sqr()).sum();
            prop_assert!((total - n as f64 * beta).abs() <= 1e-10 * (1.0 + n as f64 * beta));
        }

        #[test]
        fn pathloss_decreasing(d in 1.0f64..1e4, step in 1e-3f64..100.0) {
            let b = LinkBudget::<f64>::reference();
            let near = pathloss_umi(d, &b).unwrap();
            let far = pathloss_umi(d + step, &b).unwrap();
            prop_assert!(far < near);
            prop_assert!(near > 0.0 && near < 1.0);
        }

        #[test]
        fn db_round_trip(x in -200.0f64..200.0) {
            let back = linear_to_db(db_to_linear(x));
            prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0));
            let back = watt_to_dbm(dbm_to_watt(x));
            prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }
}
