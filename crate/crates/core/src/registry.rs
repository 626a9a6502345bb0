//! In-process service registry: `(kind, name)` pairs resolve to
//! factories that produce a fresh service instance per request.
//!
//! The plugin architecture boils down to one lookup: ask for a service
//! of a given kind (`"compiler"`, `"accelerator"`, `"optimizer"`, …)
//! under a unique name and receive a new object implementing that
//! kind's contract. All built-in services register through
//! [`ServiceRegistry::with_builtins`]; external code can register its
//! own factories at runtime, which is also how tests inject doubles.
//!
//! Every call to [`ServiceRegistry::get`] runs the factory again, so
//! two callers never share mutable service state.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algorithm::{Algorithm, Ddcl, Vqe};
use crate::backend::{
    Accelerator, AcceleratorDecorator, IdentityDecoratorFactory, RoErrorDecoratorFactory,
    SimAccelerator,
};
use crate::circuits::{builtin_generators, CompositeGenerator};
use crate::frontend::{builtin_compilers, Compiler};
use crate::ir::{IdentityTransform, IrTransformation, SwapRouter};
use crate::observable::{
    parse_observable, JordanWignerTransform, Observable, ObservableError, ObservableTransform,
};
use crate::optimize::{GradientDescent, NelderMead, Optimizer};

/// Errors from registry lookup and registration.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RegistryError {
    #[error("no service `{name}` of kind `{kind}` is registered")]
    ServiceNotFound { kind: String, name: String },
    #[error("a service `{name}` of kind `{kind}` is already registered")]
    DuplicateService { kind: String, name: String },
    #[error("service `{name}` is a {found}, not a {expected}")]
    WrongKind {
        name: String,
        expected: &'static str,
        found: &'static str,
    },
}

/// Parser-shaped observable service: holds the representation name and
/// builds concrete observables from text.
pub struct ObservableFactory {
    kind: String,
}

impl ObservableFactory {
    pub fn new(kind: impl Into<String>) -> Self {
        ObservableFactory { kind: kind.into() }
    }

    /// Representation name (`"pauli"`, `"fermion"`).
    pub fn kind(&self) -> &str {
        &self.kind
    }

    /// Parse `text` in this factory's representation.
    pub fn parse(
        &self,
        text: &str,
    ) -> Result<Arc<dyn Observable + Send + Sync>, ObservableError> {
        parse_observable(&self.kind, text)
    }
}

/// One resolved service instance. The variant set is closed over the
/// framework's pluggable contracts.
pub enum Service {
    Compiler(Box<dyn Compiler>),
    Accelerator(Box<dyn Accelerator + Send + Sync>),
    AcceleratorDecorator(Box<dyn AcceleratorDecorator + Send + Sync>),
    Optimizer(Box<dyn Optimizer + Send + Sync>),
    Algorithm(Box<dyn Algorithm + Send + Sync>),
    Observable(ObservableFactory),
    ObservableTransform(Box<dyn ObservableTransform + Send + Sync>),
    IrTransformation(Box<dyn IrTransformation + Send + Sync>),
    CompositeGenerator(Box<dyn CompositeGenerator + Send + Sync>),
}

impl core::fmt::Debug for Service {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Service({}:{})", self.kind(), self.name())
    }
}

macro_rules! service_accessor {
    ($fn_name:ident, $variant:ident, $kind:expr, $out:ty) => {
        pub fn $fn_name(self) -> Result<$out, RegistryError> {
            match self {
                Service::$variant(s) => Ok(s),
                other => Err(RegistryError::WrongKind {
                    name: other.name(),
                    expected: $kind,
                    found: other.kind(),
                }),
            }
        }
    };
}

impl Service {
    /// The service-kind string this instance registers under.
    pub fn kind(&self) -> &'static str {
        match self {
            Service::Compiler(_) => "compiler",
            Service::Accelerator(_) => "accelerator",
            Service::AcceleratorDecorator(_) => "accelerator-decorator",
            Service::Optimizer(_) => "optimizer",
            Service::Algorithm(_) => "algorithm",
            Service::Observable(_) => "observable",
            Service::ObservableTransform(_) => "observabletransform",
            Service::IrTransformation(_) => "irtransformation",
            Service::CompositeGenerator(_) => "composite-generator",
        }
    }

    /// The name the instance reports for itself.
    pub fn name(&self) -> String {
        match self {
            Service::Compiler(s) => s.name().to_string(),
            Service::Accelerator(s) => s.name().to_string(),
            Service::AcceleratorDecorator(s) => s.name().to_string(),
            Service::Optimizer(s) => s.name().to_string(),
            Service::Algorithm(s) => s.name().to_string(),
            Service::Observable(s) => s.kind().to_string(),
            Service::ObservableTransform(s) => s.name().to_string(),
            Service::IrTransformation(s) => s.name().to_string(),
            Service::CompositeGenerator(s) => s.name().to_string(),
        }
    }

    service_accessor!(into_compiler, Compiler, "compiler", Box<dyn Compiler>);
    service_accessor!(
        into_accelerator,
        Accelerator,
        "accelerator",
        Box<dyn Accelerator + Send + Sync>
    );
    service_accessor!(
        into_decorator,
        AcceleratorDecorator,
        "accelerator-decorator",
        Box<dyn AcceleratorDecorator + Send + Sync>
    );
    service_accessor!(
        into_optimizer,
        Optimizer,
        "optimizer",
        Box<dyn Optimizer + Send + Sync>
    );
    service_accessor!(
        into_algorithm,
        Algorithm,
        "algorithm",
        Box<dyn Algorithm + Send + Sync>
    );
    service_accessor!(into_observable, Observable, "observable", ObservableFactory);
    service_accessor!(
        into_observable_transform,
        ObservableTransform,
        "observabletransform",
        Box<dyn ObservableTransform + Send + Sync>
    );
    service_accessor!(
        into_ir_transformation,
        IrTransformation,
        "irtransformation",
        Box<dyn IrTransformation + Send + Sync>
    );
    service_accessor!(
        into_generator,
        CompositeGenerator,
        "composite-generator",
        Box<dyn CompositeGenerator + Send + Sync>
    );
}

/// A factory producing one fresh [`Service`] per call.
pub type ServiceFactory = Box<dyn Fn() -> Service + Send + Sync>;

/// The `(kind, name) → factory` catalog.
#[derive(Default)]
pub struct ServiceRegistry {
    factories: BTreeMap<(String, String), ServiceFactory>,
}

impl ServiceRegistry {
    /// An empty registry.
    pub fn new() -> Self {
        Self::default()
    }

    /// A registry with every built-in service registered.
    pub fn with_builtins() -> Self {
        let mut reg = Self::new();
        reg.register_builtins();
        reg
    }

    /// Register a factory; refuses to shadow an existing entry.
    pub fn register(
        &mut self,
        kind: &str,
        name: &str,
        factory: ServiceFactory,
    ) -> Result<(), RegistryError> {
        let key = (kind.to_string(), name.to_string());
        if self.factories.contains_key(&key) {
            return Err(RegistryError::DuplicateService {
                kind: kind.to_string(),
                name: name.to_string(),
            });
        }
        self.factories.insert(key, factory);
        Ok(())
    }

    /// Register a factory, replacing any existing entry.
    pub fn register_replacing(&mut self, kind: &str, name: &str, factory: ServiceFactory) {
        self.factories.insert((kind.to_string(), name.to_string()), factory);
    }

    /// Produce a fresh instance of the named service.
    pub fn get(&self, kind: &str, name: &str) -> Result<Service, RegistryError> {
        self.factories
            .get(&(kind.to_string(), name.to_string()))
            .map(|factory| factory())
            .ok_or_else(|| RegistryError::ServiceNotFound {
                kind: kind.to_string(),
                name: name.to_string(),
            })
    }

    pub fn contains(&self, kind: &str, name: &str) -> bool {
        self.factories.contains_key(&(kind.to_string(), name.to_string()))
    }

    /// All registered `(kind, name)` pairs, sorted.
    pub fn entries(&self) -> Vec<(String, String)> {
        self.factories.keys().cloned().collect()
    }

    /// Names registered under one kind, sorted.
    pub fn names_of_kind(&self, kind: &str) -> Vec<String> {
        self.factories
            .keys()
            .filter(|(k, _)| k == kind)
            .map(|(_, n)| n.clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.factories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factories.is_empty()
    }

    /// Drop every registration.
    pub fn clear(&mut self) {
        self.factories.clear();
    }

    // Convenience typed lookups.

    pub fn compiler(&self, name: &str) -> Result<Box<dyn Compiler>, RegistryError> {
        self.get("compiler", name)?.into_compiler()
    }

    pub fn accelerator(
        &self,
        name: &str,
    ) -> Result<Box<dyn Accelerator + Send + Sync>, RegistryError> {
        self.get("accelerator", name)?.into_accelerator()
    }

    pub fn decorator(
        &self,
        name: &str,
    ) -> Result<Box<dyn AcceleratorDecorator + Send + Sync>, RegistryError> {
        self.get("accelerator-decorator", name)?.into_decorator()
    }

    pub fn optimizer(
        &self,
        name: &str,
    ) -> Result<Box<dyn Optimizer + Send + Sync>, RegistryError> {
        self.get("optimizer", name)?.into_optimizer()
    }

    pub fn algorithm(
        &self,
        name: &str,
    ) -> Result<Box<dyn Algorithm + Send + Sync>, RegistryError> {
        self.get("algorithm", name)?.into_algorithm()
    }

    pub fn observable(&self, name: &str) -> Result<ObservableFactory, RegistryError> {
        self.get("observable", name)?.into_observable()
    }

    pub fn observable_transform(
        &self,
        name: &str,
    ) -> Result<Box<dyn ObservableTransform + Send + Sync>, RegistryError> {
        self.get("observabletransform", name)?.into_observable_transform()
    }

    pub fn ir_transformation(
        &self,
        name: &str,
    ) -> Result<Box<dyn IrTransformation + Send + Sync>, RegistryError> {
        self.get("irtransformation", name)?.into_ir_transformation()
    }

    pub fn generator(
        &self,
        name: &str,
    ) -> Result<Box<dyn CompositeGenerator + Send + Sync>, RegistryError> {
        self.get("composite-generator", name)?.into_generator()
    }

    /// Register every built-in service. Existing entries under the
    /// same `(kind, name)` are replaced.
    pub fn register_builtins(&mut self) {
        for compiler in builtin_compilers() {
            let name = compiler.name().to_string();
            let pick = name.clone();
            self.register_replacing(
                "compiler",
                &name,
                Box::new(move || {
                    let c = builtin_compilers()
                        .into_iter()
                        .find(|c| c.name() == pick)
                        .expect("builtin compiler");
                    Service::Compiler(c)
                }),
            );
        }
        self.register_replacing(
            "accelerator",
            "sim",
            Box::new(|| Service::Accelerator(Box::new(SimAccelerator::new()))),
        );
        self.register_replacing(
            "accelerator-decorator",
            "ro-error",
            Box::new(|| Service::AcceleratorDecorator(Box::new(RoErrorDecoratorFactory))),
        );
        self.register_replacing(
            "accelerator-decorator",
            "identity",
            Box::new(|| Service::AcceleratorDecorator(Box::new(IdentityDecoratorFactory))),
        );
        self.register_replacing(
            "optimizer",
            "neldermead",
            Box::new(|| Service::Optimizer(Box::new(NelderMead::new()))),
        );
        self.register_replacing(
            "optimizer",
            "gd-paramshift",
            Box::new(|| Service::Optimizer(Box::new(GradientDescent::new()))),
        );
        self.register_replacing(
            "algorithm",
            "vqe",
            Box::new(|| Service::Algorithm(Box::new(Vqe::new()))),
        );
        self.register_replacing(
            "algorithm",
            "ddcl",
            Box::new(|| Service::Algorithm(Box::new(Ddcl::new()))),
        );
        for kind in ["pauli", "fermion"] {
            self.register_replacing(
                "observable",
                kind,
                Box::new(move || Service::Observable(ObservableFactory::new(kind))),
            );
        }
        self.register_replacing(
            "observabletransform",
            "jordan-wigner",
            Box::new(|| Service::ObservableTransform(Box::new(JordanWignerTransform))),
        );
        self.register_replacing(
            "irtransformation",
            "swap-routing",
            Box::new(|| Service::IrTransformation(Box::new(SwapRouter))),
        );
        self.register_replacing(
            "irtransformation",
            "identity",
            Box::new(|| Service::IrTransformation(Box::new(IdentityTransform))),
        );
        for generator in builtin_generators() {
            let name = generator.name().to_string();
            let pick = name.clone();
            self.register_replacing(
                "composite-generator",
                &name,
                Box::new(move || {
                    let g = builtin_generators()
                        .into_iter()
                        .find(|g| g.name() == pick)
                        .expect("builtin generator");
                    Service::CompositeGenerator(g)
                }),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn builtins_resolve_by_kind_and_name() {
        let reg = ServiceRegistry::with_builtins();
        for (kind, name) in [
            ("compiler", "xasm"),
            ("compiler", "quil"),
            ("compiler", "openqasm"),
            ("accelerator", "sim"),
            ("accelerator-decorator", "ro-error"),
            ("optimizer", "neldermead"),
            ("optimizer", "gd-paramshift"),
            ("algorithm", "vqe"),
            ("algorithm", "ddcl"),
            ("observable", "pauli"),
            ("observable", "fermion"),
            ("observabletransform", "jordan-wigner"),
            ("irtransformation", "swap-routing"),
            ("composite-generator", "range"),
            ("composite-generator", "qft"),
            ("composite-generator", "exp_i_theta"),
        ] {
            let service = reg.get(kind, name).unwrap();
            assert_eq!(service.kind(), kind, "{kind}/{name}");
            assert_eq!(service.name(), name, "{kind}/{name}");
        }
    }

    #[test]
    fn missing_service_is_an_error() {
        let reg = ServiceRegistry::with_builtins();
        let err = reg.get("compiler", "nonexistent").unwrap_err();
        assert_eq!(
            err,
            RegistryError::ServiceNotFound {
                kind: "compiler".into(),
                name: "nonexistent".into()
            }
        );
    }

    #[test]
    fn duplicate_registration_requires_replace() {
        let mut reg = ServiceRegistry::new();
        reg.register(
            "optimizer",
            "neldermead",
            Box::new(|| Service::Optimizer(Box::new(NelderMead::new()))),
        )
        .unwrap();
        let err = reg
            .register(
                "optimizer",
                "neldermead",
                Box::new(|| Service::Optimizer(Box::new(NelderMead::new()))),
            )
            .unwrap_err();
        assert_eq!(
            err,
            RegistryError::DuplicateService {
                kind: "optimizer".into(),
                name: "neldermead".into()
            }
        );
        // The replace entry point shadows silently.
        reg.register_replacing(
            "optimizer",
            "neldermead",
            Box::new(|| Service::Optimizer(Box::new(GradientDescent::new()))),
        );
        assert_eq!(reg.get("optimizer", "neldermead").unwrap().name(), "gd-paramshift");
    }

    #[test]
    fn each_get_runs_the_factory_again() {
        static CALLS: AtomicUsize = AtomicUsize::new(0);
        let mut reg = ServiceRegistry::new();
        reg.register(
            "accelerator",
            "counting",
            Box::new(|| {
                CALLS.fetch_add(1, Ordering::SeqCst);
                Service::Accelerator(Box::new(SimAccelerator::new()))
            }),
        )
        .unwrap();
        let _a = reg.get("accelerator", "counting").unwrap();
        let _b = reg.get("accelerator", "counting").unwrap();
        assert_eq!(CALLS.load(Ordering::SeqCst), 2);
    }

    #[test]
    fn wrong_kind_accessor_reports_both_kinds() {
        let reg = ServiceRegistry::with_builtins();
        let err = match reg.get("optimizer", "neldermead").unwrap().into_compiler() {
            Err(e) => e,
            Ok(_) => panic!("expected a kind mismatch"),
        };
        assert_eq!(
            err,
            RegistryError::WrongKind {
                name: "neldermead".into(),
                expected: "compiler",
                found: "optimizer"
            }
        );
    }

    #[test]
    fn typed_lookups_and_listings() {
        let reg = ServiceRegistry::with_builtins();
        assert!(reg.compiler("xasm").is_ok());
        assert!(reg.accelerator("sim").is_ok());
        assert!(reg.observable("pauli").is_ok());
        let compilers = reg.names_of_kind("compiler");
        assert_eq!(compilers, ["openqasm", "quil", "xasm"]);
        assert!(reg.entries().len() >= 16);
        let parsed = reg.observable("fermion").unwrap().parse("1.0 0^ 1").unwrap();
        assert_eq!(parsed.kind(), "fermion");
    }

    #[test]
    fn clear_empties_the_catalog() {
        let mut reg = ServiceRegistry::with_builtins();
        assert!(!reg.is_empty());
        reg.clear();
        assert!(reg.is_empty());
        assert!(matches!(
            reg.get("compiler", "xasm"),
            Err(RegistryError::ServiceNotFound { .. })
        ));
    }

    #[test]
    fn decorator_service_wraps_accelerators() {
        let reg = ServiceRegistry::with_builtins();
        let decorator = reg.decorator("ro-error").unwrap();
        let inner = reg.accelerator("sim").unwrap();
        let wrapped = decorator.decorate(inner);
        assert_eq!(wrapped.name(), "ro-error");
    }
}
