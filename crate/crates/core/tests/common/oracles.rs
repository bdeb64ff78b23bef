// Generated by tests/fixtures/gen_oracles.py (mpmath, 50 digits). Do not edit.
#![allow(dead_code)]

/// sqrt(pi/2)
pub const SECH_FT_AT_ZERO: f64 = 1.253314137315500251207883;

/// transform of exp(-x^2) at xi=0
pub const GAUSS_FT_AT_0: f64 = 0.7071067811865475244008444;

/// transform of exp(-x^2) at xi=1
pub const GAUSS_FT_AT_1: f64 = 0.5506953149031837476159811;

/// transform of exp(-x^2) at xi=2
pub const GAUSS_FT_AT_2: f64 = 0.2601300475114444481790762;

/// real part of the distorted transform of 3 Q Y2^2 at sqrt(3)
pub const RESONANCE_RE: f64 = 0.02489462897350158051745525;

/// imaginary part of the distorted transform of 3 Q Y2^2 at sqrt(3)
pub const RESONANCE_IM: f64 = -0.1293562866530429499145481;

/// modulus of the resonance constant
pub const RESONANCE_ABS: f64 = 0.1317299944902166994006928;

/// transform of D1 D2 (3 Q Y2^2) at xi=0
pub const RESONANCE_POLY_FT_AT_0: f64 = 2.409429453574685849608446;

/// transform of D1 D2 (3 Q Y2^2) at xi=1
pub const RESONANCE_POLY_FT_AT_1: f64 = 1.324477712014019996776075;

/// transform of D1 D2 (3 Q Y2^2) at xi=SQRT3
pub const RESONANCE_POLY_FT_AT_SQRT3: f64 = -0.697049611258044254488747;

/// transform of alpha_1 at xi=0
pub const ALPHA1_FT_AT_0: f64 = 0.7477539683507645740164144;

/// transform of alpha_1 at xi=1
pub const ALPHA1_FT_AT_1: f64 = 0.6180895989398759984955016;

/// transform of alpha_1 at xi=SQRT3
pub const ALPHA1_FT_AT_SQRT3: f64 = 0.3485248056290221272443735;

/// transform of alpha_2 at xi=0
pub const ALPHA2_FT_AT_0: f64 = -0.1439053183049749436924369;

/// transform of alpha_2 at xi=1
pub const ALPHA2_FT_AT_1: f64 = -0.3058750254267816302504131;

/// transform of alpha_2 at xi=SQRT3
pub const ALPHA2_FT_AT_SQRT3: f64 = -0.6036626710475337662678912;

/// transform of alpha_3 at xi=0
pub const ALPHA3_FT_AT_0: f64 = -0.1869384920876911435041036;

/// transform of alpha_3 at xi=1
pub const ALPHA3_FT_AT_1: f64 = -0.3311194280035049991940187;

/// transform of alpha_3 at xi=SQRT3
pub const ALPHA3_FT_AT_SQRT3: f64 = -0.5227872084435331908665602;

/// integral of tanh^2 Y0
pub const INTEGRAL_G: f64 = 0.5773502691896257645091488;

/// combined resonant coefficient at sqrt(3)
pub const ALPHA_COMBINED_AT_SQRT3: f64 = -0.1742624028145110636221867;

/// energy of the static soliton
pub const SOLITON_ENERGY: f64 = 1.333333333333333333333333;

/// trapping constant for eps=0.04
pub const TRAP_CONST_EPS_0_04: f64 = 0.01665095184804486238295665;

/// trapping constant for eps=0.05
pub const TRAP_CONST_EPS_0_05: f64 = 0.02327041263894003812684962;

/// (Omega * omega_1) at xi=0_3
pub const OMEGA_CONV_1_AT_0_3: f64 = 0.539033653767608452409155;

/// (Omega * omega_1) at xi=1
pub const OMEGA_CONV_1_AT_1: f64 = 0.7970736306767733608672451;

/// (Omega * omega_1) at xi=SQRT3
pub const OMEGA_CONV_1_AT_SQRT3: f64 = 0.4541069213088456960416773;

/// (Omega * omega_1) at xi=2_5
pub const OMEGA_CONV_1_AT_2_5: f64 = 0.1969522723630191217067;

/// (Omega * omega_2) at xi=0_3
pub const OMEGA_CONV_2_AT_0_3: f64 = -0.8175343748808728194872184;

/// (Omega * omega_2) at xi=1
pub const OMEGA_CONV_2_AT_1: f64 = 0.0;

/// (Omega * omega_2) at xi=SQRT3
pub const OMEGA_CONV_2_AT_SQRT3: f64 = 0.2621787532585342668112404;

/// (Omega * omega_2) at xi=2_5
pub const OMEGA_CONV_2_AT_2_5: f64 = 0.206799885981170077792035;

/// (Omega * omega_3) at xi=0_3
pub const OMEGA_CONV_3_AT_0_3: f64 = 0.1840962864031853376499599;

/// (Omega * omega_3) at xi=1
pub const OMEGA_CONV_3_AT_1: f64 = 0.4345372080946957943768913;

/// (Omega * omega_3) at xi=SQRT3
pub const OMEGA_CONV_3_AT_SQRT3: f64 = 0.396691356528292641297127;

/// (Omega * omega_3) at xi=2_5
pub const OMEGA_CONV_3_AT_2_5: f64 = 0.2463815584430899558599357;

/// pairing of Omega * Omega with exp(-xi^2)
pub const OMEGA_OMEGA_SMEARED_GAUSS: f64 = -2.079902982655794494127263;
