"""1-safe timed Petri nets: model, axiomatizations, grid simulator."""

from .net import (
    TimedPetriNet, mu, eps, tau, net_atoms, Violation, IsolatedNode, UnknownNode, BadArc,
    DuplicateNode, InitialNotPlace, MissingBounds, BoundsInverted, AlphaTooSmall, BetaTooClose,
    NotMultipleOfDelta, validate_structure, check_nondegenerate, NetSyntaxError, parse_net, format_net,
)
from .axioms import AxiomVariant, NetPreconditionError, generate_axioms, axioms_conjunction
from .simulate import (
    simulate, SimulationError, NoLassoWithinBound, DeadlockBeforeBound, UnsafeNet, POLICIES,
)
