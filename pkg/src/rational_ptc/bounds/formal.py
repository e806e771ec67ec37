"""
Equality TC_r = zcl_r for pure TNCZ fibrations with formal elliptic fiber and formal base.

Purity and TNCZ are checked by the engine; formality and ellipticity are
user assertions, so every value from this route is conditional.
"""

import logging
from typing import Optional

from ..fibration import FibrationPresentation, fiber_dimension, pure_check, tncz_check
from ..interfaces import ComputedValue, Provenance, Status
from ..invariants import zcl

logger = logging.getLogger(__name__)

REQUIRED_ASSERTIONS = ("fiber_formal", "fiber_elliptic", "base_formal")


class FormalTnczRoute:
    """Upper bound TC_r <= zcl_r, which makes the zcl lower bound exact."""

    def __init__(self, fibration: FibrationPresentation, cutoff: int):
        """
        Initialize the route and check its hypotheses.

        Args:
            fibration: Validated fibration presentation
            cutoff: Degree window for the TNCZ check and for zcl
        """
        self.fibration = fibration
        self.cutoff = cutoff
        self.missing = self._missing_hypotheses()

    def _missing_hypotheses(self) -> list[str]:
        f = self.fibration
        missing = [flag for flag in REQUIRED_ASSERTIONS if not f.assertions.has(flag)]
        if missing:
            return missing
        if not pure_check(f):
            missing.append("pure")
            return missing
        dimension = fiber_dimension(f)
        window = self.cutoff if dimension is None else min(self.cutoff, dimension.degree)
        report = tncz_check(f, window)
        if not report.surjective:
            if f.assertions.has("fibration_tncz_asserted"):
                logger.warning(
                    "Ignoring fibration_tncz_asserted for %r: H(fiber) is not hit in degree %d",
                    f,
                    report.first_failure,
                )
            missing.append(f"tncz (fails in degree {report.first_failure})")
        elif not f.assertions.has("fibration_tncz_asserted") and (dimension is None or dimension.degree > self.cutoff):
            missing.append(f"tncz (checked only through degree {window})")
        return missing

    def applicable(self) -> bool:
        return not self.missing

    def evaluate(self, r: int) -> Optional[ComputedValue]:
        """
        zcl_r as an upper bound, or ``None`` when the route does not apply or zcl is uncertified.
        """
        if not self.applicable():
            logger.debug("Formal TNCZ route not applicable to %r: %s", self.fibration, self.missing)
            return None
        value = zcl(self.fibration, r, self.cutoff)
        if value.status == Status.AT_LEAST:
            logger.info("Formal TNCZ route for %r: zcl_%d is not certified through %d", self.fibration, r, self.cutoff)
            return None
        assertions = self.fibration.assertions.describe(*REQUIRED_ASSERTIONS, "fibration_tncz_asserted")
        return ComputedValue(
            value.value,
            Status.CONDITIONAL,
            Provenance(
                "formal_tncz_equality",
                f"TC_{r} = zcl_{r} for a pure TNCZ fibration with formal elliptic fiber and formal base",
                value.provenance.inputs + (("pure", "checked"), ("tncz", "checked")),
                tuple(dict.fromkeys(assertions + value.provenance.assertions)),
            ),
            value.notes,
        )

    def __repr__(self) -> str:
        state = "applicable" if self.applicable() else f"missing {', '.join(self.missing)}"
        return f"FormalTnczRoute({self.fibration.name or 'f'}, cutoff={self.cutoff}, {state})"
