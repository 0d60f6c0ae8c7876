//! Inputs shared by the benchmarks.

use cfk_core::{
    builtin, double, extract_a0, BuiltinName, Convention, IotaComplex, IotaTauComplex, Result, SurgeryComplex,
};

pub fn fig8() -> Result<IotaComplex> {
    builtin(BuiltinName::Fig8)
}

pub fn fig8_double() -> Result<IotaTauComplex> {
    double(&fig8()?, Convention::Thm31)
}

pub fn fig8_a0() -> Result<SurgeryComplex> {
    extract_a0(&fig8_double()?)
}
