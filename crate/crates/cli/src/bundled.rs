//! Scenario and plan files compiled into the binary.

pub struct Bundled {
    pub name: &'static str,
    pub kind: Kind,
    pub text: &'static str,
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Scenario,
    Plan,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Scenario => "scenario",
            Kind::Plan => "plan",
        }
    }
}

macro_rules! bundle {
    ($kind:expr, $dir:literal, $name:literal) => {
        Bundled {
            name: $name,
            kind: $kind,
            text: include_str!(concat!("../", $dir, "/", $name, ".json")),
        }
    };
}

pub const ALL: &[Bundled] = &[
    bundle!(Kind::Scenario, "scenarios", "dice"),
    bundle!(Kind::Scenario, "scenarios", "normal-2x2"),
    bundle!(Kind::Scenario, "scenarios", "subgroup"),
    bundle!(Kind::Plan, "plans", "paradox-kw"),
    bundle!(Kind::Plan, "plans", "paradox-kw-pseudo"),
    bundle!(Kind::Plan, "plans", "dice-equal-kw"),
    bundle!(Kind::Plan, "plans", "trend-sign-b"),
    bundle!(Kind::Plan, "plans", "trend-sign-c"),
    bundle!(Kind::Plan, "plans", "contrast-balanced"),
    bundle!(Kind::Plan, "plans", "contrast-unbalanced"),
    bundle!(Kind::Plan, "plans", "contrast-unbalanced-pseudo"),
    bundle!(Kind::Plan, "plans", "anova-unbalanced"),
    bundle!(Kind::Plan, "plans", "coverage-psi"),
];

pub fn find(kind: Kind, name: &str) -> Option<&'static Bundled> {
    ALL.iter().find(|b| b.kind == kind && b.name == name)
}

pub fn names(kind: Kind) -> Vec<&'static str> {
    ALL.iter().filter(|b| b.kind == kind).map(|b| b.name).collect()
}
