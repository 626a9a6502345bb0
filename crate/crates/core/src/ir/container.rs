//! Ordered collection of top-level composites, as produced by one
//! compilation unit.

use alloc::vec::Vec;

use super::Composite;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IrContainer {
    composites: Vec<Composite>,
}

impl IrContainer {
    pub fn new() -> IrContainer {
        IrContainer::default()
    }

    /// Add a composite; an existing composite with the same name is
    /// replaced in place, preserving its position.
    pub fn add(&mut self, composite: Composite) {
        match self.composites.iter_mut().find(|c| c.name() == composite.name()) {
            Some(slot) => *slot = composite,
            None => self.composites.push(composite),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Composite> {
        self.composites.iter().find(|c| c.name() == name)
    }

    pub fn composites(&self) -> &[Composite] {
        &self.composites
    }

    pub fn len(&self) -> usize {
        self.composites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.composites.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Composite> {
        self.composites.iter()
    }
}

impl IntoIterator for IrContainer {
    type Item = Composite;
    type IntoIter = alloc::vec::IntoIter<Composite>;

    fn into_iter(self) -> Self::IntoIter {
        self.composites.into_iter()
    }
}

impl FromIterator<Composite> for IrContainer {
    fn from_iter<T: IntoIterator<Item = Composite>>(iter: T) -> Self {
        let mut out = IrContainer::new();
        for c in iter {
            out.add(c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_name_replaces_in_place() {
        let mut ir = IrContainer::new();
        ir.add(Composite::new("a"));
        ir.add(Composite::new("b"));
        let mut a2 = Composite::with_variables("a", ["t"]);
        a2.add_instruction(crate::ir::Instruction::gate("H", [0]).unwrap());
        ir.add(a2);
        assert_eq!(ir.len(), 2);
        assert_eq!(ir.composites()[0].name(), "a");
        assert_eq!(ir.composites()[0].leaf_count(), 1);
        assert_eq!(ir.composites()[1].name(), "b");
        assert!(ir.get("c").is_none());
    }
}
