//! Fault injection for negative controls. A mutation is active only on the
//! thread that installed it and only for the duration of the closure.

use std::cell::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// Flip the sign of the `-d^x` block of every mapping cone.
    ConeSignFlip,
    /// Tag every level-weak step of a zig-zag certificate as a quasi-isomorphism.
    MislabelQis,
}

impl Mutation {
    pub fn name(self) -> &'static str {
        match self {
            Mutation::ConeSignFlip => "cone-sign-flip",
            Mutation::MislabelQis => "mislabel-qis",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "cone-sign-flip" => Some(Mutation::ConeSignFlip),
            "mislabel-qis" => Some(Mutation::MislabelQis),
            _ => None,
        }
    }
}

thread_local! {
    static ACTIVE: Cell<Option<Mutation>> = const { Cell::new(None) };
}

pub fn active_mutation() -> Option<Mutation> {
    ACTIVE.with(|a| a.get())
}

pub fn with_mutation<T>(m: Option<Mutation>, f: impl FnOnce() -> T) -> T {
    struct Restore(Option<Mutation>);
    impl Drop for Restore {
        fn drop(&mut self) {
            ACTIVE.with(|a| a.set(self.0));
        }
    }
    let _restore = Restore(ACTIVE.with(|a| a.replace(m)));
    f()
}
