from .events import EventLog
from .sessions import BackendBundle, Session, SessionManager, SessionRequest

__all__ = ["BackendBundle", "EventLog", "Session", "SessionManager", "SessionRequest"]
