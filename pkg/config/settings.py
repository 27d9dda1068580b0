import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv


load_dotenv()


def readOptionalInt(name: str) -> Optional[int]:
    rawValue = os.getenv(name, "").strip()
    if not rawValue:
        return None
    return int(rawValue)


@dataclass
class Settings:
    maxSpaceDim: Optional[int] = readOptionalInt("SOCLE_LAB_MAX_DIM")
    glMaxDegree: int = int(os.getenv("SOCLE_LAB_GL_MAX_DEGREE", "5"))
    glMaxRank: int = int(os.getenv("SOCLE_LAB_GL_MAX_RANK", "8"))
    classicalMaxDegree: int = int(os.getenv("SOCLE_LAB_CLASSICAL_MAX_DEGREE", "4"))
    classicalMaxRank: int = int(os.getenv("SOCLE_LAB_CLASSICAL_MAX_RANK", "5"))
    verifyWorkers: int = int(os.getenv("SOCLE_LAB_VERIFY_WORKERS", "4"))
    sampleSeed: int = int(os.getenv("SOCLE_LAB_SAMPLE_SEED", "0"))

    @property
    def hasDimensionOverride(self) -> bool:
        return self.maxSpaceDim is not None

    def isCapped(self, algebra: str, n: int, degree: int) -> bool:
        """True when a model of this size is over the desk-scale caps."""
        if algebra in ("gl", "sl"):
            withinCaps = degree <= self.glMaxDegree and n <= self.glMaxRank
            spaceDim = n ** degree
        else:
            withinCaps = degree <= self.classicalMaxDegree and n <= self.classicalMaxRank
            spaceDim = (2 * n) ** degree
        if withinCaps:
            return False
        if self.hasDimensionOverride:
            return spaceDim > self.maxSpaceDim
        return True


appSettings = Settings()
