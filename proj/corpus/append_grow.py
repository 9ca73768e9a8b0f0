def appendGrow(n: list[int], v: int) -> int:
    n.append(v)
    if len(n) == 0:
        return -1
    if len(n) < 0:
        return -2
    return n[-1]
