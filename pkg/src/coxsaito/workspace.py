"""Per-process build cache and suite runner shared by the CLI and tests."""

from __future__ import annotations

import json
import os
from pathlib import Path

from . import catalog
from .algebra import (
    build_mul_table,
    check_boolean_split,
    check_fibers,
    check_generator_match,
    check_mul_table,
    check_normalization_gap,
    check_quotient_rule,
    verify_generators,
)
from .catalog import build_datum, datum_to_json
from .certs import CheckFailure, det_payload, run_check, zero_combo_payload
from .engine import Budget
from .freediv import (
    adjoint_divisor,
    check_b3_fixture,
    check_basis_change,
    check_derivative_ideal,
    check_distinguished_monomials,
    check_free_divisor_sum,
    check_lift,
)
from .polymatrix import jacobian
from .rankcond import (
    ARRANGEMENT,
    DISCRIMINANT,
    build_minor_table,
    check_drc,
    check_grc,
    check_hrc,
    equivalence_probe,
)
from .saito import (
    PullbackCache,
    build_saito,
    logarithmic_quotients,
    normalize_linear_part,
)

ALL_SUITES = (
    "datum",
    "saito",
    "grc-A",
    "grc-D",
    "drc",
    "hrc",
    "algebra",
    "fibers",
    "fractions",
    "generators",
    "freediv",
    "lift",
)

_CLASSICAL_ORDERS = {
    "A": lambda n: catalog._factorial(n + 1),
    "B": lambda n: 2**n * catalog._factorial(n),
    "D": lambda n: 2 ** (n - 1) * catalog._factorial(n),
    "I2": lambda k: 2 * k,
    "H": lambda n: 120 if n == 3 else 14400,
    "F": lambda _n: 1152,
}


def check_datum(datum, budget=None):
    """Catalog certification: group order, exponent bookkeeping, and the
    Jacobian determinant identity."""

    def body():
        expected = 1
        for tag, param in catalog.parse_type(datum.name):
            expected *= _CLASSICAL_ORDERS[tag](param)
        if datum.group_order != expected:
            raise CheckFailure(
                f"group order {datum.group_order} != classical value {expected}"
            )
        exps = datum.exponents
        if sum(exps) != datum.mirror_count:
            raise CheckFailure("exponent sum does not match the mirror count")
        factors = datum.factors or [(datum, 0)]
        for part, _off in factors:
            pe = part.exponents
            h = part.coxeter_number
            for i in range(part.rank):
                if pe[i] + pe[part.rank - 1 - i] != h:
                    raise CheckFailure("exponent symmetry fails")
        degs = 1
        for w in datum.degrees:
            degs *= w
        if degs != datum.group_order:
            raise CheckFailure("degree product does not match the group order")
        # mirrors are pairwise non-proportional, so delta is squarefree
        seen = set()
        for f in datum.mirror_forms:
            key = tuple(sorted(f.t.items(), key=lambda kv: kv[0]))
            if key in seen:
                raise CheckFailure("repeated mirror form")
            seen.add(key)
        J = jacobian(datum.invariants, datum.ring)
        payload = [det_payload("jacobian", J, datum.jac_const, [datum.delta])]
        return {
            "order": datum.group_order,
            "mirrors": datum.mirror_count,
            "degrees": datum.degrees,
            "jac_const": str(datum.jac_const),
        }, payload

    return run_check("datum", datum.name, body, budget)


def check_saito_shape(sd, budget=None):
    """Symmetry, the Euler column, logarithmic fields, and the triangular
    shape of the linear part (with any field obstruction recorded)."""

    def body():
        datum = sd.datum
        l = datum.rank
        if not sd.K_S.is_symmetric() or not sd.K_R.is_symmetric():
            raise CheckFailure("Saito matrix is not symmetric")
        sdn = normalize_linear_part(sd)
        quotients = logarithmic_quotients(sd)
        payload = []
        for j, q in enumerate(quotients["eta"]):
            from .saito import eta_field_apply

            val = eta_field_apply(sd, j, datum.delta)
            payload.append(
                zero_combo_payload(
                    f"eta-log-{j+1}",
                    [(val, datum.ring.one()), (-q, datum.delta)],
                )
            )
        for j, q in enumerate(quotients["delta"]):
            from .saito import field_apply

            val = field_apply(sd.K_R, j, sd.disc)
            payload.append(
                zero_combo_payload(
                    f"delta-log-{j+1}",
                    [(val, sd.p_ring.one()), (-q, sd.disc)],
                )
            )
        constants = {
            "euler_const": str(sd.euler_const),
            "disc_const": str(sd.disc_const),
            "pull_const": str(sd.pull_const),
            "alphas": [str(a) for a in sdn.alphas],
        }
        if sdn.shape_obstruction:
            constants["shape_obstruction"] = sdn.shape_obstruction["reason"]
        if sd.dihedral_shape:
            constants["dihedral"] = {
                k: str(v) for k, v in sd.dihedral_shape.items()
            }
        return constants, payload

    return run_check("saito-shape", sd.datum.name, body, budget)


def check_discriminant_monic(sd, budget=None):
    """The discriminant is degree rank in the top invariant with constant
    leading coefficient; rank-2 types match the closed normal form."""

    def body():
        datum = sd.datum
        l = datum.rank
        p_ring = sd.p_ring
        top = [0] * l
        top[l - 1] = l
        lead = sd.disc.coeff_of(tuple(top))
        if not lead:
            raise CheckFailure("no top power of the highest invariant")
        for e in sd.disc.t:
            if e[l - 1] > l:
                raise CheckFailure("excess power of the highest invariant")
        constants = {"leading": str(lead)}
        payload = []
        if l == 2 and sd.dihedral_shape is not None:
            h = datum.coxeter_number
            shape = sd.dihedral_shape
            lam, a, b = shape["lambda"], shape["a"], shape["b"]
            p1, p2 = p_ring.gen(0), p_ring.gen(1)
            expect = (p1 ** h).scale(2 * a) - (p2 * p2).scale(h * h)
            if h % 2 == 0:
                expect = expect + (p1 ** (h // 2) * p2).scale(2 * b)
            elif b:
                raise CheckFailure("odd Coxeter number with a mixed term")
            lhs = sd.disc.scale(sd.disc_const)
            rhs = expect.scale(lam * lam)
            if lhs != rhs:
                raise CheckFailure("rank-2 discriminant normal form mismatch")
            payload.append(
                zero_combo_payload(
                    "dihedral-form",
                    [(lhs, p_ring.one()), (-rhs, p_ring.one())],
                )
            )
            constants.update({"a": str(a), "b": str(b), "lambda": str(lam)})
        return constants, payload

    return run_check("discriminant-monic", sd.datum.name, body, budget)


class Workspace:
    """Builds and memoizes the apparatus per type; runs named suites."""

    def __init__(self, budget_steps=None, cache_dir=None):
        self.budget = Budget(budget_steps) if budget_steps else None
        self.cache_dir = cache_dir or os.environ.get("COXSAITO_CACHE")
        self._saito = {}
        self._tables = {}
        self._mul = {}
        self._pull = {}

    def datum(self, name):
        if self.cache_dir:
            path = Path(self.cache_dir) / f"{name}.datum.json"
            if path.exists():
                from . import catalog as cat

                got = cat._DATUM_CACHE.get(name)
                if got is None:
                    with open(path) as fh:
                        got = cat.datum_from_json(json.load(fh))
                    cat._DATUM_CACHE[name] = got
                return got
            got = build_datum(name)
            Path(self.cache_dir).mkdir(parents=True, exist_ok=True)
            from .catalog import save_fixture

            save_fixture(got, path)
            return got
        return build_datum(name)

    def saito(self, name):
        got = self._saito.get(name)
        if got is None:
            got = build_saito(self.datum(name))
            logarithmic_quotients(got)
            self._saito[name] = got
        return got

    def pullback_cache(self, name):
        got = self._pull.get(name)
        if got is None:
            got = PullbackCache(self.datum(name))
            self._pull[name] = got
        return got

    def minor_table(self, name, side):
        key = (name, side)
        got = self._tables.get(key)
        if got is None:
            got = build_minor_table(self.saito(name), side, self.budget)
            self._tables[key] = got
        return got

    def mul_table(self, name, side):
        key = (name, side)
        got = self._mul.get(key)
        if got is None:
            if side == ARRANGEMENT:
                got = build_mul_table(
                    self.minor_table(name, side),
                    self.budget,
                    from_discriminant=self.mul_table(name, DISCRIMINANT),
                    cache=self.pullback_cache(name),
                )
            else:
                got = build_mul_table(self.minor_table(name, side), self.budget)
            self._mul[key] = got
        return got

    # -- suites ------------------------------------------------------------

    def run_suite(self, name, suite):
        """Run one named suite; build-phase failures become certificates."""
        from .certs import Certificate
        from .engine import BudgetExceeded

        try:
            return self._run_suite(name, suite)
        except BudgetExceeded as exc:
            return [
                Certificate(
                    name=suite, ctype=name, verdict="indeterminate", detail=str(exc)
                )
            ]
        except CheckFailure as exc:
            return [Certificate(name=suite, ctype=name, verdict="fail", detail=str(exc))]

    def _run_suite(self, name, suite):
        budget = self.budget
        datum = self.datum(name)
        if suite == "datum":
            return [check_datum(datum, budget)]
        if not datum.irreducible:
            if suite == "algebra" and all(
                part.name == "A1" for part, _off in datum.factors
            ):
                # Boolean arrangements split into polynomial factors
                return [check_boolean_split(datum, None, budget)]
            # the remaining suites run per irreducible factor
            certs = []
            for part, _off in datum.factors:
                certs.extend(self.run_suite(part.name, suite))
            return certs
        if suite == "saito":
            sd = self.saito(name)
            return [check_saito_shape(sd, budget), check_discriminant_monic(sd, budget)]
        if suite == "grc-A":
            return [check_grc(self.minor_table(name, ARRANGEMENT), budget)]
        if suite == "grc-D":
            certs = [check_grc(self.minor_table(name, DISCRIMINANT), budget)]
            if name == "B3":
                certs.append(check_b3_fixture(self.minor_table(name, DISCRIMINANT), budget))
            return certs
        if suite == "drc":
            return [check_drc(datum, self.saito(name), budget)]
        if suite == "hrc":
            certs = [check_hrc(datum, self.saito(name), budget)]
            grc_a = check_grc(self.minor_table(name, ARRANGEMENT), budget)
            drc = check_drc(datum, self.saito(name), budget)
            certs.append(equivalence_probe(certs[0], drc, grc_a, name))
            return certs
        if suite == "algebra":
            certs = []
            for side in (ARRANGEMENT, DISCRIMINANT):
                table = self.minor_table(name, side)
                certs.append(verify_generators(table, budget))
                certs.append(check_mul_table(self.mul_table(name, side), budget))
            return certs
        if suite == "fibers":
            return [check_fibers(self.mul_table(name, ARRANGEMENT), budget=budget)]
        if suite == "fractions":
            return [
                check_quotient_rule(
                    self.saito(name),
                    self.minor_table(name, ARRANGEMENT),
                    self.pullback_cache(name),
                    budget,
                )
            ]
        if suite == "generators":
            return [
                check_generator_match(
                    self.saito(name),
                    self.minor_table(name, ARRANGEMENT),
                    self.minor_table(name, DISCRIMINANT),
                    self.pullback_cache(name),
                    budget,
                )
            ]
        if suite == "freediv":
            table = self.minor_table(name, DISCRIMINANT)
            certs = [
                adjoint_divisor(table, budget),
                check_derivative_ideal(table, budget),
                check_basis_change(table, budget),
                check_free_divisor_sum(table, budget),
            ]
            sdn = normalize_linear_part(self.saito(name))
            if sdn.shape_obstruction is None:
                certs.append(check_distinguished_monomials(sdn, budget))
            h = datum.coxeter_number
            if datum.rank == 2 and h % 2 == 1 and h >= 5:
                certs.append(
                    check_normalization_gap(
                        self.saito(name), table, budget
                    )
                )
            return certs
        if suite == "lift":
            return [
                check_lift(
                    self.minor_table(name, DISCRIMINANT),
                    self.pullback_cache(name),
                    budget,
                )
            ]
        raise ValueError(f"unknown suite {suite!r}")

    # -- fixtures ------------------------------------------------------------

    def saito_to_json(self, name):
        sd = self.saito(name)
        out = {
            "type": name,
            "K_R": sd.K_R.to_json(),
            "disc": sd.disc.to_json(),
            "disc_const": str(sd.disc_const),
            "pull_const": str(sd.pull_const),
            "euler_const": str(sd.euler_const),
        }
        if sd.dihedral_shape:
            out["dihedral"] = {k: str(v) for k, v in sd.dihedral_shape.items()}
        if name == "B3":
            fx = check_b3_fixture(self.minor_table(name, DISCRIMINANT), self.budget)
            out["published_matrix_check"] = fx.constants
        return out

    def emit_fixtures(self, name, out_dir):
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        datum = self.datum(name)
        paths = []
        p1 = out_dir / f"{name}.datum.json"
        with open(p1, "w") as fh:
            json.dump(datum_to_json(datum), fh, indent=1, sort_keys=True)
            fh.write("\n")
        paths.append(p1)
        if datum.irreducible:
            p2 = out_dir / f"{name}.saito.json"
            with open(p2, "w") as fh:
                json.dump(self.saito_to_json(name), fh, indent=1, sort_keys=True)
                fh.write("\n")
            paths.append(p2)
        return paths
