"""Exception types shared across the package."""


class MolzkError(Exception):
    """Base class for all package errors."""


class ParameterError(MolzkError):
    """An operation was called with arguments outside its contract."""


class DecodeError(MolzkError):
    """Malformed serialized material (field elements, points, proofs, keys).

    Deliberately distinct from a clean verification failure: a proof that
    decodes but does not verify returns False, while garbage raises this.
    """


class DataError(MolzkError):
    """Problem with evaluation-record input data."""


class EmptyInputError(DataError):
    """An input source yielded zero parsable records."""


class MetricOverflowError(DataError):
    """A scaled metric exceeded the 32-bit circuit bound (corrupt record)."""


class SynthesisError(MolzkError):
    """Circuit synthesis was asked for an impossible shape."""


class WitnessError(MolzkError):
    """Witness generation failed (out-of-range private inputs)."""


class SetupError(MolzkError):
    """Key generation failed."""


class ProverError(MolzkError):
    """The witness does not satisfy the constraint system being proven."""


class RegistryError(MolzkError):
    """Nullifier registry I/O failure."""


class RegistryCorruptError(RegistryError):
    """The persistent nullifier log contains an unparsable entry."""


class ConfigError(MolzkError):
    """A harness was invoked with an unusable configuration."""
