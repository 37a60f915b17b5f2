"""selftest: exhaustive invariant checks on small codebooks"""

import argparse
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

import logging
import numpy as np

from subchirp.algebra.clifford import g_f, phi
from subchirp.algebra.gf2core import BitVec
from subchirp.algebra.pauli import apply, stabilizer_of_bssc
from subchirp.algebra.symplectic import clifford_image, enumerate_cosets
from subchirp.cli.common import EXIT_OK, EXIT_SELFTEST, open_output
from subchirp.codes.bssc import BsscParams, max_coherence, synthesize
from subchirp.decoding.decoder import decode_noiseless
from subchirp.errors import SubchirpError

logger = logging.getLogger(__name__)


@dataclass
class GroupResult:
    name: str
    passed: bool
    detail: str


def check_stabilizer(m: int) -> str:
    """Every stabilizer element fixes every codeword of its label up to sign"""
    checked = 0
    for label in enumerate_cosets(m):
        group = stabilizer_of_bssc(label)
        if len(group.off_diagonal_patterns()) != 2 ** label.r:
            raise AssertionError(f"label rank {label.r}: wrong number of off-diagonal patterns")
        for b in range(2 ** m):
            w = synthesize(BsscParams(label, BitVec(m, b))).to_vector()
            for element in group.elements():
                image = apply(element, w)
                if not (np.allclose(image, w, atol=1e-12) or np.allclose(image, -w, atol=1e-12)):
                    raise AssertionError(f"m={m} r={label.r} b={b}: codeword is not a stabilizer eigenvector")
            checked += 1
    return f"m={m}: {checked} codewords"


def check_phi(m: int) -> str:
    count = 0
    for label in enumerate_cosets(m):
        image = phi(g_f(label))
        if image.matrix != clifford_image(label).matrix or not image.is_symplectic():
            raise AssertionError(f"m={m} r={label.r}: symplectic image mismatch")
        count += 1
    return f"m={m}: {count} labels"


def check_coherence(m: int) -> str:
    words = [synthesize(p) for label in enumerate_cosets(m) for p in _params(label, m)]
    value = max_coherence(words)
    if value != Fraction(1, 2):
        raise AssertionError(f"m={m}: max |<c, c'>|^2 = {value}")
    return f"m={m}: max |ip|^2 = {float(value)}"


def check_roundtrip(m: int) -> str:
    count = 0
    for label in enumerate_cosets(m):
        for p in _params(label, m):
            if decode_noiseless(synthesize(p).to_vector()) != p:
                raise AssertionError(f"m={m} r={label.r} b={p.b}: decoded parameters differ")
            count += 1
    return f"m={m}: {count} codewords"


def _params(label, m: int) -> List[BsscParams]:
    return [BsscParams(label, BitVec(m, b)) for b in range(2 ** m)]


GROUPS = [
    ("stabilizer", check_stabilizer, 1),
    ("phi", check_phi, 1),
    ("coherence", check_coherence, 2),
    ("roundtrip", check_roundtrip, 1),
]


def _run_group(name: str, check: Callable[[int], str], first_m: int, max_m: int) -> GroupResult:
    details = []
    try:
        for m in range(first_m, max_m + 1):
            details.append(check(m))
    except (AssertionError, SubchirpError) as e:
        logger.debug(f"{name} failed: {e}")
        return GroupResult(name, False, str(e))
    return GroupResult(name, True, "; ".join(details))


def run_checks(max_m: int = 3) -> List[GroupResult]:
    return [_run_group(name, check, first_m, max_m) for name, check, first_m in GROUPS]


def register(subparsers) -> None:
    parser = subparsers.add_parser("selftest", help="exhaustive invariant checks for small m")
    parser.add_argument("--max-m", type=int, default=3, choices=[1, 2, 3])
    parser.add_argument("--out")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    results = run_checks(args.max_m)
    with open_output(args.out) as handle:
        for result in results:
            handle.write(f"{result.name}: {'PASS' if result.passed else 'FAIL'} ({result.detail})\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_SELFTEST
