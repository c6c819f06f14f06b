//! Farey and Lasota–Yorke dynamics, first entry and return times, renewal
//! traces and the fluctuation process `X_n`.

mod induced;
mod lasota_yorke;
mod map;
mod renewal;

pub use induced::{entry_time, entry_time_from_digits, farey_orbit_hits, first_return_time, verify_induced_map};
pub use lasota_yorke::{ly_spent_time, scan_spent_times};
pub use map::{
    farey_map, farey_step, gauss_step, in_a1, interval_index, inverse_branch_power, lasota_yorke_map, left_inverse,
    right_inverse, ExactPoint,
};
pub use renewal::{
    fluctuation, kac_process, log_scaled, renewal_trace, scan_fluctuations, FluctuationRecord, RenewalTrace,
};
