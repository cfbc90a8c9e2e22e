"""The eight-zone label space for obituary sentences."""

from enum import Enum

from .errors import LabelError


class Zone(Enum):
    """Closed set of sentence zones, in canonical order.

    The member order is load-bearing: it fixes matrix axes, tie-breaking in
    the dominant-class mapping, and the 1..8 keyboard shortcuts of the
    annotation UI.
    """

    PI = "PI"  # Personal Information
    BS = "BS"  # Biographical Sketch
    FA = "FA"  # Family
    C = "C"    # Characteristics
    T = "T"    # Tribute
    G = "G"    # Gratitude
    FI = "FI"  # Funeral Information
    O = "O"    # Other

    @classmethod
    def parse(cls, code):
        try:
            return cls(code)
        except ValueError:
            raise LabelError(f"unknown zone code: {code!r}") from None

    @property
    def index(self):
        return ZONES.index(self)


ZONES = list(Zone)

ZONE_NAMES = {
    Zone.PI: "Personal Information",
    Zone.BS: "Biographical Sketch",
    Zone.FA: "Family",
    Zone.C: "Characteristics",
    Zone.T: "Tribute",
    Zone.G: "Gratitude",
    Zone.FI: "Funeral Information",
    Zone.O: "Other",
}
