"""Exception hierarchy shared by every module."""


class SsimmarkError(ValueError):
    """Base class for data errors raised by this package."""


class PgmFormatError(SsimmarkError):
    """Malformed PGM header or payload."""


class UnsupportedDepthError(PgmFormatError):
    """PGM maxval other than 255."""


class TruncatedPayloadError(PgmFormatError):
    """PGM payload shorter than the header promises."""


class DimensionMismatchError(SsimmarkError):
    pass


class ImageTooSmallError(SsimmarkError):
    pass


class KeyFormatError(SsimmarkError):
    """Unparseable or inconsistent watermark key."""


class LengthMismatchError(SsimmarkError):
    pass
