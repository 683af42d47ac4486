"""Frame/time helpers for the lane departure tracker."""


def frame_to_timestamp_ms(frame_index: int, fps: float) -> int:
    """Returns the presentation time of a frame in whole milliseconds."""
    return round(frame_index * 1000 / fps)


def frames_to_seconds(frames: int, fps: float) -> float:
    """Returns a frame count as a duration in seconds."""
    return frames / fps
