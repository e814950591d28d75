// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.

#ifndef SIGCLASS_ERRORS_HPP
#define SIGCLASS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sigclass {

// Base for every error raised by the toolkit. Subclasses map onto the CLI
// exit-code contract: UsageError -> 1, everything else here -> 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class DuplicatePath : public Error {
public:
    using Error::Error;
};

class UnknownLabel : public Error {
public:
    using Error::Error;
};

class EmptyFile : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class TooShort : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class EmptyClass : public Error {
public:
    using Error::Error;
};

class FormatVersionMismatch : public Error {
public:
    using Error::Error;
};

class CorruptModel : public Error {
public:
    using Error::Error;
};

class FingerprintMismatch : public Error {
public:
    using Error::Error;
};

class InvalidK : public Error {
public:
    using Error::Error;
};

class TooFewSamples : public Error {
public:
    using Error::Error;
};

class MissingDataset : public Error {
public:
    using Error::Error;
};

} // namespace sigclass

#endif
