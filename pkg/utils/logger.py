import logging
import os
from pathlib import Path
from typing import Optional


LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"


def resolveLogPath() -> Optional[Path]:
    """LOG_PATH relative to the project root; an empty value turns the file log off."""
    rawPath = os.getenv("LOG_PATH", "logs/soclelab.log").strip()
    if not rawPath:
        return None
    logPath = Path(rawPath)
    if not logPath.is_absolute():
        logPath = Path(__file__).resolve().parent.parent / logPath
    logPath.parent.mkdir(parents=True, exist_ok=True)
    return logPath


def getLogger(name: str) -> logging.Logger:
    consoleLevel = logging.getLevelName(os.getenv("LOG_LEVEL", "INFO").upper())
    fileLevel = logging.getLevelName(os.getenv("LOG_FILE_LEVEL", "DEBUG").upper())

    rootLogger = logging.getLogger()
    if not rootLogger.handlers:
        logPath = resolveLogPath()
        rootLogger.setLevel(min(consoleLevel, fileLevel) if logPath else consoleLevel)

        # stderr only: stdout is reserved for command output
        streamHandler = logging.StreamHandler()
        streamHandler.setLevel(consoleLevel)
        streamHandler.setFormatter(logging.Formatter(LOG_FORMAT))
        rootLogger.addHandler(streamHandler)

        if logPath is not None:
            fileHandler = logging.FileHandler(logPath, encoding="utf-8")
            fileHandler.setLevel(fileLevel)
            fileHandler.setFormatter(logging.Formatter(LOG_FORMAT))
            rootLogger.addHandler(fileHandler)

    return logging.getLogger(name)
