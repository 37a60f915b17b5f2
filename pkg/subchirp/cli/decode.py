"""decode: recover codewords from a received vector"""

import argparse
import csv
import io
import json
from typing import Optional

import numpy as np

from subchirp.cli.common import EXIT_OK, open_output, read_text
from subchirp.codes.bssc import KINDS, BsscParams, Codebook
from subchirp.decoding.decoder import decode_multi, decode_noiseless
from subchirp.errors import DecodeError, InputError


def read_vector(text: str, m: int) -> np.ndarray:
    """Parse `index,re,im` rows; every index 0 .. 2^m - 1 exactly once"""
    n = 2 ** m
    samples = np.zeros(n, dtype=complex)
    seen = set()
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip():
            continue
        if lineno == 1 and not row[0].strip().lstrip("-").isdigit():
            continue  # header
        if len(row) != 3:
            raise InputError(f"Line {lineno}: expected index,re,im")
        try:
            index, re, im = int(row[0]), float(row[1]), float(row[2])
        except ValueError as e:
            raise InputError(f"Line {lineno}: {e}") from e
        if not 0 <= index < n:
            raise InputError(f"Line {lineno}: index {index} outside [0, {n})")
        if index in seen:
            raise InputError(f"Line {lineno}: index {index} repeated")
        if not (np.isfinite(re) and np.isfinite(im)):
            raise InputError(f"Line {lineno}: non-finite sample")
        seen.add(index)
        samples[index] = complex(re, im)
    if len(seen) != n:
        raise InputError(f"Expected {n} samples, found {len(seen)}")
    return samples


def result_line(user: int, params: BsscParams, codebook: Codebook, coefficient: Optional[complex]) -> str:
    record = {"user": user, "id": codebook.index(params)}
    record.update(params.describe())
    if coefficient is not None:
        record["coefficient"] = [float(coefficient.real), float(coefficient.imag)]
    return json.dumps(record)


def register(subparsers) -> None:
    parser = subparsers.add_parser("decode", help="decode a vector given as index,re,im CSV")
    parser.add_argument("--m", type=int, required=True)
    parser.add_argument("--in", required=True, dest="input")
    parser.add_argument("--users", type=int, default=1)
    parser.add_argument("--kind", choices=KINDS, default="bssc")
    parser.add_argument(
        "--robust",
        action="store_true",
        help="use matching pursuit even for a single user",
    )
    parser.add_argument("--out")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    codebook = Codebook(args.m, args.kind)
    samples = read_vector(read_text(args.input), args.m)
    lines = []
    if args.users == 1 and not args.robust:
        params = decode_noiseless(samples)
        if params.r not in codebook.ranks:
            raise DecodeError(f"Decoded a rank-{params.r} codeword outside the {args.kind} codebook")
        lines.append(result_line(0, params, codebook, None))
    else:
        result = decode_multi(samples, args.users, ranks=codebook.ranks)
        for user, (params, h) in enumerate(zip(result.recovered, result.coefficients)):
            lines.append(result_line(user, params, codebook, complex(h)))
    with open_output(args.out) as handle:
        for line in lines:
            handle.write(line + "\n")
    return EXIT_OK
