"""Syntactic SMILES validation.

Grammar-level checking only: token stream shape, parenthesis balance,
ring-closure pairing, and bond placement. No valence, aromaticity
perception, or stereochemistry — validity here means "well-formed string",
and callers that know better (an upstream cheminformatics toolkit) can
override the verdict via an explicit validity flag on their records.

Wildcard atoms '*' and stereo markers inside brackets are accepted with a
warning rather than rejected; generated molecules use them routinely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import ParameterError

MAX_INPUT_BYTES = 10_000

ORGANIC_ATOMS = ("Cl", "Br", "B", "C", "N", "O", "P", "S", "F", "I", "b", "c", "n", "o", "p", "s")

BOND_CHARS = "-=#:/\\"

_BRACKET_BODY = re.compile(
    r"""
    (?P<isotope>\d{1,3})?
    (?P<symbol>[A-Z][a-z]?|[bcnops]|as|se|\*)
    (?P<stereo>@@?)?
    (?P<hcount>H\d*)?
    (?P<charge>\+{1,3}|-{1,3}|[+-]\d{1,2})?
    (?::(?P<cls>\d+))?
    """,
    re.VERBOSE,
)


class TokenKind(Enum):
    ORGANIC_ATOM = "organic_atom"
    BRACKET_ATOM = "bracket_atom"
    BOND = "bond"
    RING_BOND_DIGIT = "ring_bond_digit"
    BRANCH_OPEN = "branch_open"
    BRANCH_CLOSE = "branch_close"
    DOT = "dot"


@dataclass(frozen=True)
class SmilesToken:
    kind: TokenKind
    text: str
    position: int


class SmilesSyntaxError(ParameterError):
    """Raised by tokenize for input that cannot be scanned at all."""

    def __init__(self, position: int, message: str):
        super().__init__(f"position {position}: {message}")
        self.position = position
        self.message = message


@dataclass
class ValidationReport:
    valid: bool
    errors: list = field(default_factory=list)    # (position, message) pairs
    warnings: list = field(default_factory=list)  # (position, message) pairs


def tokenize(smiles: str) -> list[SmilesToken]:
    """Scan a SMILES string into tokens; context checks happen in validate."""
    if not isinstance(smiles, str):
        raise ParameterError("SMILES input must be a string")
    if smiles == "":
        raise SmilesSyntaxError(0, "empty input")
    if len(smiles.encode("utf-8")) > MAX_INPUT_BYTES:
        raise SmilesSyntaxError(0, f"input exceeds {MAX_INPUT_BYTES} bytes")

    tokens = []
    i = 0
    n = len(smiles)
    while i < n:
        ch = smiles[i]
        if ch == "[":
            end = smiles.find("]", i + 1)
            if end < 0:
                raise SmilesSyntaxError(i, "unterminated bracket atom")
            body = smiles[i + 1 : end]
            if not body or not _BRACKET_BODY.fullmatch(body):
                raise SmilesSyntaxError(i, f"malformed bracket atom [{body}]")
            tokens.append(SmilesToken(TokenKind.BRACKET_ATOM, smiles[i : end + 1], i))
            i = end + 1
        elif smiles.startswith(("Cl", "Br"), i):
            tokens.append(SmilesToken(TokenKind.ORGANIC_ATOM, smiles[i : i + 2], i))
            i += 2
        elif ch in "BCNOPSFIbcnops":
            tokens.append(SmilesToken(TokenKind.ORGANIC_ATOM, ch, i))
            i += 1
        elif ch in BOND_CHARS:
            tokens.append(SmilesToken(TokenKind.BOND, ch, i))
            i += 1
        elif ch.isdigit():
            tokens.append(SmilesToken(TokenKind.RING_BOND_DIGIT, ch, i))
            i += 1
        elif ch == "%":
            if i + 2 >= n or not smiles[i + 1 : i + 3].isdigit():
                raise SmilesSyntaxError(i, "'%' ring closure needs two digits")
            tokens.append(SmilesToken(TokenKind.RING_BOND_DIGIT, smiles[i : i + 3], i))
            i += 3
        elif ch == "(":
            tokens.append(SmilesToken(TokenKind.BRANCH_OPEN, ch, i))
            i += 1
        elif ch == ")":
            tokens.append(SmilesToken(TokenKind.BRANCH_CLOSE, ch, i))
            i += 1
        elif ch == ".":
            tokens.append(SmilesToken(TokenKind.DOT, ch, i))
            i += 1
        else:
            raise SmilesSyntaxError(i, f"unknown character {ch!r}")
    return tokens


_K = TokenKind

# Token kinds a given kind may legally follow ("start" = beginning of input).
_ALLOWED_AFTER = {
    _K.ORGANIC_ATOM: {"start", _K.ORGANIC_ATOM, _K.BRACKET_ATOM, _K.BOND, _K.RING_BOND_DIGIT,
                      _K.BRANCH_OPEN, _K.BRANCH_CLOSE, _K.DOT},
    _K.BOND: {_K.ORGANIC_ATOM, _K.BRACKET_ATOM, _K.RING_BOND_DIGIT, _K.BRANCH_CLOSE, _K.BRANCH_OPEN},
    _K.RING_BOND_DIGIT: {_K.ORGANIC_ATOM, _K.BRACKET_ATOM, _K.RING_BOND_DIGIT, _K.BOND, _K.BRANCH_CLOSE},
    _K.BRANCH_OPEN: {_K.ORGANIC_ATOM, _K.BRACKET_ATOM, _K.RING_BOND_DIGIT, _K.BRANCH_CLOSE},
    _K.BRANCH_CLOSE: {_K.ORGANIC_ATOM, _K.BRACKET_ATOM, _K.RING_BOND_DIGIT, _K.BRANCH_CLOSE},
    _K.DOT: {_K.ORGANIC_ATOM, _K.BRACKET_ATOM, _K.RING_BOND_DIGIT, _K.BRANCH_CLOSE},
}
_ALLOWED_AFTER[_K.BRACKET_ATOM] = _ALLOWED_AFTER[_K.ORGANIC_ATOM]


def validate(smiles: str) -> ValidationReport:
    """Grammar-level verdict on a SMILES string; never raises on bad input."""
    report = ValidationReport(valid=False)
    try:
        tokens = tokenize(smiles)
    except SmilesSyntaxError as exc:
        report.errors.append((exc.position, exc.message))
        return report

    prev = "start"
    depth = 0
    atom_count = 0
    open_rings = {}  # digit text -> (position, atom ordinal at open)
    for tok in tokens:
        if prev not in _ALLOWED_AFTER[tok.kind]:
            prev_desc = "start of input" if prev == "start" else f"'{prev.value}'"
            report.errors.append((tok.position, f"{tok.kind.value} may not follow {prev_desc}"))
        if tok.kind in (_K.ORGANIC_ATOM, _K.BRACKET_ATOM):
            atom_count += 1
            if tok.kind is _K.BRACKET_ATOM:
                if "*" in tok.text:
                    report.warnings.append((tok.position, "wildcard atom accepted"))
                elif "@" in tok.text:
                    report.warnings.append((tok.position, "stereo marker accepted"))
        elif tok.kind is _K.BRANCH_OPEN:
            depth += 1
        elif tok.kind is _K.BRANCH_CLOSE:
            depth -= 1
            if depth < 0:
                report.errors.append((tok.position, "unmatched ')'"))
                depth = 0
        elif tok.kind is _K.RING_BOND_DIGIT:
            if tok.text in open_rings:
                open_pos, open_atom = open_rings.pop(tok.text)
                if open_atom == atom_count:
                    report.errors.append((tok.position, f"ring bond {tok.text} closes on its own atom"))
            else:
                open_rings[tok.text] = (tok.position, atom_count)
        prev = tok.kind

    if prev is _K.BOND:
        report.errors.append((tokens[-1].position, "dangling bond at end of input"))
    elif prev is _K.DOT:
        report.errors.append((tokens[-1].position, "trailing dot"))
    elif prev is _K.BRANCH_OPEN:
        report.errors.append((tokens[-1].position, "unclosed branch at end of input"))
    if depth > 0:
        report.errors.append((len(smiles), f"{depth} unclosed '('"))
    for digit, (pos, _) in sorted(open_rings.items(), key=lambda kv: kv[1][0]):
        report.errors.append((pos, f"unmatched ring closure {digit}"))
    if atom_count == 0:
        report.errors.append((0, "no atoms"))

    report.valid = not report.errors
    return report
