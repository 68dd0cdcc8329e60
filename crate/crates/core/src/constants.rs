//! Physical constants in Gaussian CGS units.

/// Reduced Planck constant, erg s.
pub const HBAR: f64 = 1.054_571_817e-27;

/// Speed of light in vacuum, cm/s.
pub const C_LIGHT: f64 = 2.997_924_58e10;

/// Elementary charge, statC.
pub const E_CHARGE: f64 = 4.803_204_712_570_263e-10;

/// Electron mass, g.
pub const M_ELECTRON: f64 = 9.109_383_701_5e-28;

/// One debye in statC cm.
pub const DEBYE: f64 = 1e-18;

/// SI -> CGS conversion factors used when loading SI-tagged documents.
pub mod si {
    /// Coulomb metre -> statC cm.
    pub const DIPOLE: f64 = 2.997_924_58e11;
    /// m^-3 -> cm^-3.
    pub const DENSITY: f64 = 1e-6;
    /// m -> cm.
    pub const LENGTH: f64 = 1e2;
    /// m^2 -> cm^2.
    pub const AREA: f64 = 1e4;
}
