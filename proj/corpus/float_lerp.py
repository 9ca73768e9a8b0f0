def lerp(a: float, b: float, t: float) -> float:
    if t < 0.0:
        t = 0.0
    if t > 1.0:
        t = 1.0
    return a + (b - a) * t
