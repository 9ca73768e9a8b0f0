def absDiff(a: int, b: int) -> int:
    d = a - b
    if d < 0:
        d = -d
    return d
