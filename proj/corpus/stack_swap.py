def stackSwap(s: list[int]) -> list[int]:
    if len(s) < 2:
        return s
    a = s.pop()
    b = s.pop()
    s.append(a)
    s.append(b)
    return s
