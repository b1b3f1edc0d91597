"""The theorem-verification suite behind `fuscoh verify`.

Each property takes a ``Session`` (a built p-local finite group plus a
coefficient system) and returns a list of ``VerificationReport``. A
failing report always carries a witness.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from app.coefficients import (
    change_of_section,
    constant_system,
    exactness_probe,
    identity_transformation,
    pre_transfer,
    random_short_exact_sequence,
    restrict_system,
    right_kan_extension,
    unit_delta,
)
from app.cohomology import (
    CochainComplex,
    SubsystemCohomology,
    cohomology,
    cup,
    stable_elements,
)
from app.coverings import build_covering, compare_transfers, kan_extension_dims
from app.errors import (
    AxiomViolation,
    DegreeCapExceeded,
    NotASubgroupChain,
    UnknownProperty,
)
from app.fixtures import load_registry, write_registry
from app.fusion import check_saturation
from app.gamma import (
    check_theta_hat,
    compose_sections,
    double_coset_section,
    enumerate_GH,
    make_section,
    random_section,
)
from app.linalg import is_zero_mod
from app.linking import check_linking_axioms
from app.logging import get_logger
from app.oracles import classical_transfer_maps, group_dims, invariant_dims
from app.resolution import resolution_dims
from app.types import ReportDict

logger = get_logger()


@dataclass
class VerificationReport:
    name: str
    statement: str
    passed: bool
    details: dict = field(default_factory=dict)
    witness: Optional[dict] = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> ReportDict:
        return {
            "name": self.name,
            "statement": self.statement,
            "status": self.status,
            "witness": self.witness,
            "details": self.details,
        }


def report(name, statement, failures, **details) -> VerificationReport:
    failures = list(failures)
    return VerificationReport(
        name,
        statement,
        not failures,
        details={"failures": len(failures), **details},
        witness=failures[0] if failures else None,
    )


class Session:
    """Everything a verification run needs, built lazily."""

    def __init__(self, G, F, L, gamma, M, maxdeg: int, seed: int = 0, trials: int = 100, fixture=None, regen_oracles: bool = False, fixtures_dir=None):
        self.G = G
        self.F = F
        self.L = L
        self.gamma = gamma
        self.M = M
        self.p = M.p
        self.maxdeg = maxdeg
        self.seed = seed
        self.trials = trials
        self.fixture = fixture
        self.regen_oracles = regen_oracles
        self.fixtures_dir = fixtures_dir

    @cached_property
    def ctx(self) -> SubsystemCohomology:
        return SubsystemCohomology(self.gamma, self.M, self.maxdeg)

    def rng(self, salt: int = 0):
        return np.random.default_rng([self.seed, salt])

    def restricted(self, H):
        if H == self.gamma.whole:
            return self.M
        return restrict_system(self.M, self.ctx.linking(H))

    def subgroups(self, H=None) -> list:
        return [H] if H is not None else list(self.gamma.subgroups())


PROPERTIES = {}


def register(name, statement):
    def decorator(func):
        PROPERTIES[name] = (statement, func)
        func.property_name = name
        func.statement = statement
        return func

    return decorator


def run_property(name: str, session: Session, H=None, K=None) -> list:
    if name not in PROPERTIES:
        raise UnknownProperty(
            f"unknown property {name!r}, expected one of {sorted(PROPERTIES)}"
        )
    _, func = PROPERTIES[name]
    logger.info(f"Verifying {name}")
    reports = func(session, H=H, K=K)
    for r in reports:
        log = logger.info if r.passed else logger.error
        log(f"{r.name}: {r.status}")
    return reports


def _intermediate(gamma, H):
    """The smallest subgroup strictly between H and Gamma, else Gamma."""
    for K in gamma.subgroups():
        if H < K and K != gamma.whole:
            return K
    return gamma.whole


@register(
    "saturation",
    "every fully normalized subgroup is fully centralized with Aut_S(P) "
    "Sylow in Aut_F(P), and morphisms into fully centralized subgroups "
    "extend to N_phi; the same holds for each subsystem F_H",
)
def verify_saturation(session: Session, H=None, K=None):
    reports = [
        report(
            "saturation",
            verify_saturation.statement,
            check_saturation(session.F),
            subgroups=len(session.F.subgroups),
        )
    ]
    gamma = session.gamma
    for sub in session.subgroups(H):
        if sub == gamma.whole:
            continue
        try:
            F_H, _ = gamma.subsystem(sub)
            failures = check_saturation(F_H)
        except AxiomViolation as e:
            failures = [e.witness or {"error": str(e)}]
        reports.append(
            report(
                f"saturation of F_H, |H|={sub.order}",
                verify_saturation.statement,
                failures,
                H=list(sub.key),
            )
        )
    return reports


@register(
    "linking-axioms",
    "|Mor(P,Q)| = |Z(P)|·|Hom_F(P,Q)| with a free action of Z(P), "
    "pi(delta_P(x)) = c_x, f∘delta_P(x) = delta_Q(pi(f)(x))∘f, inclusions "
    "compose, and Theta-hat is a functor killing inclusions",
)
def verify_linking_axioms(session: Session, H=None, K=None):
    L = session.L
    return [
        report(
            "linking-axioms",
            verify_linking_axioms.statement,
            check_linking_axioms(L),
            objects=L.n_objects,
            morphisms=L.n_morphisms,
        ),
        report(
            "theta-hat functor",
            verify_linking_axioms.statement,
            check_theta_hat(session.gamma),
        ),
    ]


@register(
    "gamma-surjectivity",
    "Theta-hat maps Aut_L(S) onto Gamma, and the components of G_H(P) "
    "correspond to Gamma/H for every object P",
)
def verify_gamma_surjectivity(session: Session, H=None, K=None):
    gamma, L = session.gamma, session.L
    image = sorted({int(gamma.theta_hat[m]) for m in L.aut_S()})
    failures = []
    if len(image) != gamma.gamma.order:
        failures.append({"image": image, "order": gamma.gamma.order})
    reports = [
        report(
            "gamma-surjectivity",
            verify_gamma_surjectivity.statement,
            failures,
            order=gamma.gamma.order,
        )
    ]
    for sub in session.subgroups(H):
        failures = []
        for a in range(L.n_objects):
            try:
                enumerate_GH(L, gamma, sub, a)
            except AxiomViolation as e:
                failures.append({"object": a, "error": str(e), **(e.witness or {})})
        reports.append(
            report(
                f"G_H(P) components, |H|={sub.order}",
                verify_gamma_surjectivity.statement,
                failures,
                index=gamma.index(sub),
            )
        )
    return reports


@register(
    "shapiro",
    "H^n(L; R(iota*M)) and H^n(L_H; iota*M) have equal dimensions",
)
def verify_shapiro(session: Session, H=None, K=None):
    gamma, maxdeg = session.gamma, session.maxdeg
    reports = []
    for sub in session.subgroups(H):
        M_H = session.restricted(sub)
        R = right_kan_extension(M_H, gamma, make_section(gamma, sub))
        extended = resolution_dims(session.L.category, R, maxdeg)
        restricted = resolution_dims(M_H.category, M_H, maxdeg)
        failures = [
            {"degree": n, "kan": a, "subsystem": b}
            for n, (a, b) in enumerate(zip(extended, restricted))
            if a != b
        ]
        reports.append(
            report(
                f"shapiro, |H|={sub.order}",
                verify_shapiro.statement,
                failures,
                kan_dims=extended,
                subsystem_dims=restricted,
            )
        )
    return reports


@register(
    "normalization",
    "Pre-Tr ∘ delta_M = [Gamma:H]·id as natural transformations and "
    "Tr ∘ Res = [Gamma:H]·id on H^n",
)
def verify_normalization(session: Session, H=None, K=None):
    gamma, M, p = session.gamma, session.M, session.p
    H = H if H is not None else gamma.trivial
    section = make_section(gamma, H)
    index = section.index
    R = right_kan_extension(session.restricted(H), gamma, section)
    composite = pre_transfer(M, gamma, section, R).compose(unit_delta(M, gamma, section, R))
    natural = []
    if not composite.equals(identity_transformation(M, index)):
        natural.append({"components": [A.tolist() for A in composite.components]})
    ctx = session.ctx
    failures = []
    for n in range(session.maxdeg + 1):
        product = ctx.tr_map(section, n) @ ctx.res_map(H, gamma.whole, n) % p
        expected = index * np.eye(product.shape[0], dtype=np.int64) % p
        if not np.array_equal(product, expected):
            failures.append({"degree": n, "matrix": product.tolist()})
    return [
        report(
            "normalization (natural transformations)",
            verify_normalization.statement,
            natural,
            factor=index,
        ),
        report(
            "normalization (cohomology)",
            verify_normalization.statement,
            failures,
            factor=index,
            factor_mod_p=index % p,
        ),
    ]


@register(
    "double-coset",
    "Res_H ∘ Tr_K = sum over H\\Gamma/K of Tr^H_(H∩xKx^-1) ∘ c_x ∘ "
    "Res^K_(x^-1Hx∩K), exactly on cochains",
)
def verify_double_coset(session: Session, H=None, K=None):
    gamma, ctx, p = session.gamma, session.ctx, session.p
    H = H if H is not None else gamma.trivial
    K = K if K is not None else H
    section, blocks = double_coset_section(gamma, H, K)
    rng = session.rng(1)
    failures = []
    for n in range(session.maxdeg + 1):
        left = ctx.res(H, gamma.whole, n) @ ctx.tr(section, n)
        right = None
        for block in blocks:
            term = (
                ctx.tr(block.inner, n)
                @ ctx.conj(block.alpha, block.W, block.V, n)
                @ ctx.res(block.V, K, n)
            )
            right = term if right is None else right + term
        source = ctx.complex(K)
        for _ in range(session.trials):
            phi = source.random_cochain(n, rng)
            diff = (left @ phi - right @ phi) % p
            if np.any(diff):
                failures.append({"degree": n, "cochain": phi.tolist()})
                break
        if not failures and not is_zero_mod(left - right, p):
            failures.append({"degree": n, "reason": "operators differ"})
    return [
        report(
            "double-coset",
            verify_double_coset.statement,
            failures,
            H=list(H.key),
            K=list(K.key),
            double_cosets=len(blocks),
            trials=session.trials,
        )
    ]


@register(
    "transitivity",
    "Tr_H = Tr_K ∘ Tr_H^K exactly on cochains for H <= K, and "
    "Tr_H^K ∘ Res^K_H = [K:H]·id on H^n",
)
def verify_transitivity(session: Session, H=None, K=None):
    gamma, ctx, p = session.gamma, session.ctx, session.p
    H = H if H is not None else gamma.trivial
    K = K if K is not None else _intermediate(gamma, H)
    if not H <= K:
        raise NotASubgroupChain(f"{H} is not contained in {K}")
    outer = make_section(gamma, K)
    inner = make_section(gamma, H, K)
    composed = compose_sections(gamma, outer, inner)
    rng = session.rng(2)
    failures, normal = [], []
    for n in range(session.maxdeg + 1):
        direct = ctx.tr(composed, n)
        stepwise = ctx.tr(outer, n) @ ctx.tr(inner, n)
        if not is_zero_mod(direct - stepwise, p):
            phi = ctx.complex(H).random_cochain(n, rng)
            failures.append({"degree": n, "cochain": phi.tolist()})
        product = ctx.tr_map(inner, n) @ ctx.res_map(H, K, n) % p
        expected = inner.index * np.eye(product.shape[0], dtype=np.int64) % p
        if not np.array_equal(product, expected):
            normal.append({"degree": n, "matrix": product.tolist()})
    return [
        report(
            "transitivity",
            verify_transitivity.statement,
            failures,
            H=list(H.key),
            K=list(K.key),
        ),
        report(
            "normalization within K",
            verify_transitivity.statement,
            normal,
            factor=inner.index,
        ),
    ]


@register(
    "stable-elements",
    "the image of Res_H in H^n(L_H) is the subspace of stable elements",
)
def verify_stable_elements(session: Session, H=None, K=None):
    gamma = session.gamma
    H = H if H is not None else gamma.trivial
    rows = [stable_elements(session.ctx, H, n) for n in range(session.maxdeg + 1)]
    failures = [
        {k: row[k] for k in ("degree", "stable_dim", "image_dim")}
        for row in rows
        if not row["equal"]
    ]
    return [
        report(
            "stable-elements",
            verify_stable_elements.statement,
            failures,
            H=list(H.key),
            stable_dims=[row["stable_dim"] for row in rows],
            image_dims=[row["image_dim"] for row in rows],
        )
    ]


@register(
    "frobenius",
    "Tr(Res(x) ∪ y) - x ∪ Tr(y) is a coboundary",
)
def verify_frobenius(session: Session, H=None, K=None):
    gamma, ctx, p = session.gamma, session.ctx, session.p
    H = H if H is not None else gamma.trivial
    section = make_section(gamma, H)
    whole = gamma.whole
    big, small = ctx.complex(whole), ctx.complex(H)
    result_big, result_small = ctx.result(whole), ctx.result(H)
    failures = []
    pairs = 0
    for k in range(session.maxdeg + 1):
        for m in range(session.maxdeg + 1 - k):
            for x in result_big.representatives[k]:
                restricted = ctx.res(H, whole, k) @ x % p
                for y in result_small.representatives[m]:
                    left = ctx.tr(section, k + m) @ cup(small, restricted, k, y, m) % p
                    right = cup(big, x, k, ctx.tr(section, m) @ y % p, m)
                    pairs += 1
                    if not result_big.is_coboundary(k + m, (left - right) % p):
                        failures.append({"degrees": [k, m], "x": x.tolist(), "y": y.tolist()})
    return [
        report(
            "frobenius",
            verify_frobenius.statement,
            failures,
            H=list(H.key),
            pairs=pairs,
        )
    ]


@register(
    "section-independence",
    "transfer maps on H^n do not depend on the section, and the change of "
    "section isomorphism intertwines the Pre-Tr maps",
)
def verify_section_independence(session: Session, H=None, K=None, sections: int = 5):
    gamma, ctx, M = session.gamma, session.ctx, session.M
    H = H if H is not None else gamma.trivial
    canonical = make_section(gamma, H)
    M_H = session.restricted(H)
    R_sigma = right_kan_extension(M_H, gamma, canonical)
    pre_sigma = pre_transfer(M, gamma, canonical, R_sigma)
    rng = session.rng(3)
    failures, intertwining = [], []
    for trial in range(sections):
        other = random_section(gamma, H, rng)
        for n in range(session.maxdeg + 1):
            a, b = ctx.tr_map(canonical, n), ctx.tr_map(other, n)
            if not np.array_equal(a, b):
                failures.append(
                    {"trial": trial, "degree": n, "section": other.to_dict()}
                )
        R_tau = right_kan_extension(M_H, gamma, other)
        phi = change_of_section(R_sigma, R_tau, M_H)
        if not pre_sigma.compose(phi).equals(pre_transfer(M, gamma, other, R_tau)):
            intertwining.append({"trial": trial, "section": other.to_dict()})
    return [
        report(
            "section-independence",
            verify_section_independence.statement,
            failures,
            H=list(H.key),
            sections=sections,
        ),
        report(
            "change of section",
            verify_section_independence.statement,
            intertwining,
        ),
    ]


@register(
    "geometric-comparison",
    "the transfer through the covering category agrees with the algebraic "
    "transfer on H^n for locally constant coefficients, and the right Kan "
    "extensions along L_H -> L and along the covering have equal cohomology",
)
def verify_geometric_comparison(session: Session, H=None, K=None):
    gamma, L = session.gamma, session.L
    H = H if H is not None else gamma.trivial
    covering = build_covering(gamma, H)
    shape = []
    if covering.category.n_objects != L.n_objects * covering.index:
        shape.append({"objects": covering.category.n_objects})
    under = [covering.undercategory(c) for c in range(L.n_objects)]
    shape.extend(
        {"object": c, "components": u["components"]}
        for c, u in enumerate(under)
        if u["components"] != covering.index or None in u["initial"]
    )
    rows = compare_transfers(session.ctx, H, session.maxdeg)
    kan = kan_extension_dims(gamma, session.M, H, session.maxdeg)
    return [
        report(
            "covering category",
            verify_geometric_comparison.statement,
            shape,
            **covering.to_dict(),
        ),
        report(
            "geometric-comparison",
            verify_geometric_comparison.statement,
            [row for row in rows if not row["equal"]],
            degrees=rows,
        ),
        report(
            "kan extensions along the covering",
            verify_geometric_comparison.statement,
            [kan] if kan["subsystem"] != kan["covering"] else [],
            **kan,
        ),
    ]


@register(
    "kan-exactness",
    "the right Kan extension along L_H -> L carries short exact sequences "
    "to short exact sequences",
)
def verify_kan_exactness(session: Session, H=None, K=None):
    gamma = session.gamma
    H = H if H is not None else gamma.trivial
    section = make_section(gamma, H)
    M_H = session.restricted(H)
    const = constant_system(M_H.category, 1, session.p, linking=M_H.linking)
    rng = session.rng(4)
    failures = []
    for trial in range(session.trials):
        f, g = random_short_exact_sequence(M_H, const, rng)
        probe = exactness_probe(f, g, gamma, section)
        if not probe["exact"]:
            failures.append({"trial": trial, **probe["failures"][0]})
    return [
        report(
            "kan-exactness",
            verify_kan_exactness.statement,
            failures,
            H=list(H.key),
            trials=session.trials,
        )
    ]


def oracle_values(session: Session, H=None) -> dict:
    """Registry entries computed by the independent code paths."""
    G, F, L, gamma, p = session.G, session.F, session.L, session.gamma, session.p
    maxdeg = session.maxdeg
    command = f"fuscoh verify oracles {session.fixture} --regen-oracles"
    values = {
        "gamma_order": (gamma.gamma.order, "coset enumeration on the presentation of F^c"),
        "objects": (L.n_objects, "enumeration of F-centric subgroups"),
        "morphisms": (L.n_morphisms, "transporter cosets"),
        "aut_S": (len(L.aut_S()), "transporter cosets"),
        "group_dims": (group_dims(G, p, maxdeg), "projective resolution over F_p[G]"),
    }
    if all(
        G.mul(x, y) == G.mul(y, x) for x in F.S.generators for y in F.S.generators
    ):
        values["invariant_dims"] = (
            invariant_dims(F, maxdeg),
            "Aut_F(S)-invariants of the bar cohomology of B(S)",
        )
    return {
        key: {"value": value, "oracle": oracle, "command": command}
        for key, (value, oracle) in values.items()
    }


@register(
    "oracles",
    "the linking system reproduces the values of the independent oracles: "
    "group cohomology of G, invariants of H^*(B(S)) and the classical transfer",
)
def verify_oracles(session: Session, H=None, K=None):
    gamma, L, p, maxdeg = session.gamma, session.L, session.p, session.maxdeg
    entries = oracle_values(session)
    reports = []
    const = constant_system(L.category, 1, p, linking=L)
    linking_dims = resolution_dims(L.category, const, maxdeg)
    group = entries["group_dims"]["value"]
    reports.append(
        report(
            "constant coefficients (resolution)",
            verify_oracles.statement,
            [{"linking": linking_dims, "group": group}] if linking_dims != group else [],
            dims=linking_dims,
        )
    )
    try:
        nerve_dims = cohomology(CochainComplex(const), maxdeg).dims
    except DegreeCapExceeded as e:
        logger.info(f"Nerve comparison limited by the caps: {e}")
        nerve_dims = None
    if nerve_dims is not None:
        reports.append(
            report(
                "constant coefficients (nerve)",
                verify_oracles.statement,
                [{"nerve": nerve_dims, "group": group}] if nerve_dims != group else [],
                dims=nerve_dims,
            )
        )
    if "invariant_dims" in entries:
        invariants = entries["invariant_dims"]["value"]
        reports.append(
            report(
                "invariants of H^*(B(S))",
                verify_oracles.statement,
                [{"invariants": invariants, "linking": linking_dims}] if invariants != linking_dims else [],
                dims=invariants,
            )
        )
    if L.n_objects == 1 and all(C.order == 1 for C in L.complements):
        H = H if H is not None else gamma.trivial
        ctx = SubsystemCohomology(gamma, const, maxdeg)
        section = make_section(gamma, H)
        classical = classical_transfer_maps(ctx, H, maxdeg)
        failures = [
            {"degree": n, "classical": A.tolist(), "p-local": ctx.tr_map(section, n).tolist()}
            for n, A in enumerate(classical)
            if not np.array_equal(A, ctx.tr_map(section, n))
        ]
        reports.append(
            report(
                "classical transfer",
                verify_oracles.statement,
                failures,
                H=list(H.key),
            )
        )
    if session.fixture is not None:
        if session.regen_oracles:
            write_registry(session.fixture, entries, session.fixtures_dir)
        else:
            reports.append(
                registry_report(
                    session.fixture,
                    entries,
                    session.fixtures_dir,
                    degrees=session.maxdeg + 1,
                )
            )
    return reports


def registry_report(name: str, entries: dict, fixtures_dir: str = None, degrees: int = None) -> VerificationReport:
    """Compare fresh oracle values with the stored registry.

    List values are compared on their first ``degrees`` entries, and both
    lists must have that many; without ``degrees`` they must be equal.
    """
    registry = load_registry(name, fixtures_dir)
    failures = []
    for key, entry in entries.items():
        if key not in registry:
            continue
        stored, fresh = registry[key]["value"], entry["value"]
        if isinstance(stored, list) and degrees is not None:
            if len(stored) < degrees or len(fresh) < degrees:
                failures.append(
                    {
                        "key": key,
                        "reason": f"fewer than {degrees} degrees",
                        "stored": len(stored),
                        "computed": len(fresh),
                    }
                )
                continue
            stored, fresh = stored[:degrees], fresh[:degrees]
        if stored != fresh:
            failures.append({"key": key, "stored": stored, "computed": fresh})
    return report(
        "oracle registry",
        "stored oracle values match a fresh computation",
        failures,
        fixture=name,
        compared=sorted(set(registry) & set(entries)),
    )
