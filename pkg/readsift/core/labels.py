"""Read classes and their fixed index order."""

from enum import StrEnum


class ReadClass(StrEnum):
    """Class of a read, as inferred from its coverage graph."""

    CHIMERIC = "chimeric"
    LEFT_REPEAT = "left_repeat"
    RIGHT_REPEAT = "right_repeat"
    REGULAR = "regular"

    @property
    def index(self) -> int:
        return CLASSES.index(self)

    @classmethod
    def from_index(cls, index: int) -> "ReadClass":
        return CLASSES[index]

    def mirrored(self) -> "ReadClass":
        """Class of the same read read back-to-front."""
        if self is ReadClass.LEFT_REPEAT:
            return ReadClass.RIGHT_REPEAT
        if self is ReadClass.RIGHT_REPEAT:
            return ReadClass.LEFT_REPEAT
        return self


# Model output order: score k belongs to CLASSES[k]
CLASSES: tuple[ReadClass, ...] = (
    ReadClass.CHIMERIC,
    ReadClass.LEFT_REPEAT,
    ReadClass.RIGHT_REPEAT,
    ReadClass.REGULAR,
)
