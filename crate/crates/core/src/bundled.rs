//! Instance files compiled into the library.

pub const BUNDLED: &[(&str, &str)] = &[
    ("chain2_q3.qc", include_str!("../../../instances/chain2_q3.qc")),
    ("chain3_q2.qa", include_str!("../../../instances/chain3_q2.qa")),
    ("chain3_q2.qc", include_str!("../../../instances/chain3_q2.qc")),
    ("chain3_q2.qm", include_str!("../../../instances/chain3_q2.qm")),
    ("chain3_q2.qp", include_str!("../../../instances/chain3_q2.qp")),
    ("chain3dup_q2.qc", include_str!("../../../instances/chain3dup_q2.qc")),
    ("const_bot.qf", include_str!("../../../instances/const_bot.qf")),
    ("const_top.qf", include_str!("../../../instances/const_top.qf")),
    ("hom1_qrel3.qm", include_str!("../../../instances/hom1_qrel3.qm")),
    ("lift_bot.qf", include_str!("../../../instances/lift_bot.qf")),
    ("p1_qrel3.qc", include_str!("../../../instances/p1_qrel3.qc")),
    ("pd1_qrel3.qc", include_str!("../../../instances/pd1_qrel3.qc")),
    ("q2.qt", include_str!("../../../instances/q2.qt")),
    ("q3.qt", include_str!("../../../instances/q3.qt")),
    ("q3self.qa", include_str!("../../../instances/q3self.qa")),
    ("q3self.qm", include_str!("../../../instances/q3self.qm")),
    ("qrel3.qt", include_str!("../../../instances/qrel3.qt")),
    ("weight_chain3.qd", include_str!("../../../instances/weight_chain3.qd")),
    ("zero_qrel3.qc", include_str!("../../../instances/zero_qrel3.qc")),
];
