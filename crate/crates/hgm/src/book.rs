// The mdbook chapters under book/src are compiled as doc-tests here so
// the guide's code snippets stay in sync with the library.
#![allow(unused)]

#[doc = include_str!("../../../book/src/families.md")]
mod families {}
